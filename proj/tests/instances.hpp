#pragma once

// Small exactly-solvable instances shared across the test suites. Kernels use
// dyadic probabilities and integer costs throughout, so double arithmetic on
// them is exact and reference values can be pinned tightly.

#include "riskdp/mdp.hpp"

namespace riskdp::test {

/// One state, one action, unit cost self-loop.
inline FiniteMdp make_single_loop() {
    FiniteMdp mdp(1, 1);
    mdp.set_admissible(0, {0});
    mdp.add_transition(0, 0, 0, 1.0);
    mdp.set_cost(0, 0, 1.0);
    return mdp;
}

/// One state, two self-loop actions with costs 1 and 2.
inline FiniteMdp make_two_action_loop() {
    FiniteMdp mdp(1, 2);
    mdp.set_admissible(0, {0, 1});
    mdp.add_transition(0, 0, 0, 1.0);
    mdp.add_transition(0, 1, 0, 1.0);
    mdp.set_cost(0, 0, 1.0);
    mdp.set_cost(0, 1, 2.0);
    return mdp;
}

/// 0 -> 1 -> 2 at unit cost, 2 absorbing. Total cost from 0 is 2 for any
/// horizon >= 2.
inline FiniteMdp make_deterministic_chain() {
    FiniteMdp mdp(3, 1);
    for (int x = 0; x < 3; ++x) {
        mdp.set_admissible(x, {0});
    }
    mdp.add_transition(0, 0, 1, 1.0);
    mdp.add_transition(1, 0, 2, 1.0);
    mdp.add_transition(2, 0, 2, 1.0);
    mdp.set_cost(0, 0, 1.0);
    mdp.set_cost(1, 0, 1.0);
    mdp.set_cost(2, 0, 0.0);
    return mdp;
}

/**
 * Safe-or-gamble choice at state 0: action 0 pays 2 and finishes; action 1 is
 * free but lands in state 1 (which then pays 3) with probability 1/4. From
 * x0 = 0 the total cost is 2 under "safe" and {0 w.p. 3/4, 3 w.p. 1/4} under
 * "gamble", so the preferred action flips as the risk level grows.
 */
inline FiniteMdp make_gamble() {
    FiniteMdp mdp(3, 2);
    mdp.set_admissible(0, {0, 1});
    mdp.set_admissible(1, {0});
    mdp.set_admissible(2, {0});
    mdp.add_transition(0, 0, 2, 1.0);
    mdp.add_transition(0, 1, 1, 0.25);
    mdp.add_transition(0, 1, 2, 0.75);
    mdp.add_transition(1, 0, 2, 1.0);
    mdp.add_transition(2, 0, 2, 1.0);
    mdp.set_cost(0, 0, 2.0);
    mdp.set_cost(0, 1, 0.0);
    mdp.set_cost(1, 0, 3.0);
    mdp.set_cost(2, 0, 0.0);
    mdp.set_absorbing({2});
    return mdp;
}

/// Two states, two actions everywhere, no absorption; every (x, a) matters
/// and budgets spread quickly, which makes it a good enumeration workout.
inline FiniteMdp make_chain2x2() {
    FiniteMdp mdp(2, 2);
    mdp.set_admissible(0, {0, 1});
    mdp.set_admissible(1, {0, 1});
    mdp.add_transition(0, 0, 0, 0.5);
    mdp.add_transition(0, 0, 1, 0.5);
    mdp.add_transition(0, 1, 0, 0.25);
    mdp.add_transition(0, 1, 1, 0.75);
    mdp.add_transition(1, 0, 0, 1.0);
    mdp.add_transition(1, 1, 1, 1.0);
    mdp.set_cost(0, 0, 1.0);
    mdp.set_cost(0, 1, 0.0);
    mdp.set_cost(1, 0, 2.0);
    mdp.set_cost(1, 1, 1.0);
    return mdp;
}

/**
 * Insure-or-risk at state 0, repair-or-limp at the broken state 1, state 2
 * done. Limping is cheaper in expectation but can repeat; the best choice at
 * state 1 depends on the remaining budget, so optimal behavior genuinely
 * depends on the augmented coordinate.
 */
inline FiniteMdp make_insurance() {
    FiniteMdp mdp(3, 2);
    mdp.set_admissible(0, {0, 1});
    mdp.set_admissible(1, {0, 1});
    mdp.set_admissible(2, {0});
    mdp.add_transition(0, 0, 1, 0.25);
    mdp.add_transition(0, 0, 2, 0.75);
    mdp.add_transition(0, 1, 2, 1.0);
    mdp.add_transition(1, 0, 2, 1.0);
    mdp.add_transition(1, 1, 1, 0.5);
    mdp.add_transition(1, 1, 2, 0.5);
    mdp.add_transition(2, 0, 2, 1.0);
    mdp.set_cost(0, 0, 0.0);
    mdp.set_cost(0, 1, 1.0);
    mdp.set_cost(1, 0, 2.0);
    mdp.set_cost(1, 1, 1.0);
    mdp.set_cost(2, 0, 0.0);
    mdp.set_absorbing({2});
    return mdp;
}

/// Unit cost per stage until a fair coin sends state 0 to the absorbing
/// state 1; the total cost is geometric with mean 2.
inline FiniteMdp make_geometric() {
    FiniteMdp mdp(2, 1);
    mdp.set_admissible(0, {0});
    mdp.set_admissible(1, {0});
    mdp.add_transition(0, 0, 0, 0.5);
    mdp.add_transition(0, 0, 1, 0.5);
    mdp.add_transition(1, 0, 1, 1.0);
    mdp.set_cost(0, 0, 1.0);
    mdp.set_cost(1, 0, 0.0);
    mdp.set_absorbing({1});
    return mdp;
}

}  // namespace riskdp::test
