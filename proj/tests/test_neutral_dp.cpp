#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "instances.hpp"
#include "riskdp/neutral_dp.hpp"
#include "riskdp/oracle.hpp"

using riskdp::backward_induction;
using riskdp::BackwardInductionResult;
using riskdp::ConvergenceError;
using riskdp::FiniteMdp;
using riskdp::oracle_min_expected;
using riskdp::states_missing_absorption;
using riskdp::value_iteration_infinite;
using riskdp::ValueIterationResult;

namespace {

// Expected cost of a stationary policy by iterating its own (non-optimizing)
// operator; used to confirm that the greedy policy achieves the claimed value.
std::vector<double> evaluate_stationary(const FiniteMdp& mdp, const std::vector<int>& decision,
                                        int sweeps) {
    std::vector<double> u(mdp.state_count(), 0.0);
    for (int k = 0; k < sweeps; ++k) {
        std::vector<double> next(mdp.state_count(), 0.0);
        for (int x = 0; x < mdp.state_count(); ++x) {
            const int a = decision[x];
            const auto& row = mdp.transitions(x, a);
            double v = mdp.cost(x, a);
            for (std::size_t j = 0; j < row.size(); ++j) {
                v += row.probabilities[j] * u[row.next_states[j]];
            }
            next[x] = v;
        }
        u = std::move(next);
    }
    return u;
}

}  // namespace

TEST_CASE("backward induction on hand-solved instances") {
    const BackwardInductionResult chain =
        backward_induction(riskdp::test::make_deterministic_chain(), 3);
    CHECK(chain.values[0][0] == 2.0);
    CHECK(chain.values[0][1] == 1.0);
    CHECK(chain.values[1][0] == 2.0);  // one stage cut off, still reaches absorption

    const BackwardInductionResult loop =
        backward_induction(riskdp::test::make_two_action_loop(), 4);
    CHECK(loop.values[0][0] == 4.0);
    for (int n = 0; n < 4; ++n) {
        CHECK(loop.policy.action(n, 0) == 0);  // cheaper loop wins every stage
    }

    // Gamble: expectation prefers the free risky action at every stage.
    const BackwardInductionResult gamble = backward_induction(riskdp::test::make_gamble(), 3);
    CHECK(gamble.values[0][0] == 0.75);
    CHECK(gamble.values[0][1] == 3.0);
    CHECK(gamble.policy.action(0, 0) == 1);
    CHECK(gamble.values[3][0] == 0.0);
}

TEST_CASE("backward induction matches exhaustive enumeration") {
    for (int horizon : {1, 2, 3}) {
        const FiniteMdp mdp = riskdp::test::make_chain2x2();
        const BackwardInductionResult dp = backward_induction(mdp, horizon);
        const auto oracle = oracle_min_expected(mdp, 0, horizon);
        CHECK(std::abs(dp.values[0][0] - oracle.value) <= 1e-12);
        // Identical tie-breaking: greedy actions coincide on reachable states.
        for (int n = 0; n < horizon; ++n) {
            for (int x : oracle.reachable_states[n]) {
                CHECK(dp.policy.action(n, x) == oracle.policy.action(n, x));
            }
        }
    }
    const FiniteMdp gamble = riskdp::test::make_gamble();
    const auto oracle = oracle_min_expected(gamble, 0, 3);
    CHECK(oracle.value == 0.75);
    CHECK(backward_induction(gamble, 3).values[0][0] == oracle.value);
}

TEST_CASE("value iteration solves the geometric chain") {
    const ValueIterationResult vi = value_iteration_infinite(riskdp::test::make_geometric());
    CHECK(std::abs(vi.values[0] - 2.0) <= 1e-8);
    CHECK(vi.values[1] == 0.0);
    CHECK(vi.iterations > 10);
    CHECK(vi.final_increment <= 1e-9);
    CHECK(vi.policy.action(0) == 0);
}

TEST_CASE("value iteration requires reachable zero-cost absorption") {
    CHECK(states_missing_absorption(riskdp::test::make_geometric()).empty());
    CHECK(states_missing_absorption(riskdp::test::make_insurance()).empty());
    CHECK(states_missing_absorption(riskdp::test::make_two_action_loop()) ==
          std::vector<int>{0});
    CHECK(states_missing_absorption(riskdp::test::make_chain2x2()) ==
          std::vector<int>{0, 1});

    try {
        value_iteration_infinite(riskdp::test::make_two_action_loop());
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("state(s) 0") != std::string::npos);
    }
}

TEST_CASE("discounting is an explicit approximation switch") {
    // 1 + 0.5 u = u has the fixed point 2; no absorption needed.
    const ValueIterationResult vi =
        value_iteration_infinite(riskdp::test::make_two_action_loop(), 1e-10, 100000, 0.5);
    CHECK(std::abs(vi.values[0] - 2.0) <= 1e-8);
    CHECK_THROWS_AS(value_iteration_infinite(riskdp::test::make_geometric(), 1e-9, 100, 1.5),
                    std::invalid_argument);
}

TEST_CASE("iteration budget failures carry the last increment") {
    try {
        value_iteration_infinite(riskdp::test::make_geometric(), 1e-9, 3);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.last_increment() > 1e-9);
        CHECK(e.last_increment() <= 1.0);
    }
}

TEST_CASE("greedy policy achieves its own value") {
    const FiniteMdp mdp = riskdp::test::make_insurance();
    const ValueIterationResult vi = value_iteration_infinite(mdp);
    const std::vector<double> replay = evaluate_stationary(mdp, vi.policy.decision, 300);
    for (int x = 0; x < mdp.state_count(); ++x) {
        CHECK(std::abs(replay[x] - vi.values[x]) <= 1e-6);
    }
    CHECK(std::abs(vi.values[0] - 0.5) <= 1e-8);
    CHECK(std::abs(vi.values[1] - 2.0) <= 1e-7);
}

TEST_CASE("horizon validation") {
    CHECK_THROWS_AS(backward_induction(riskdp::test::make_gamble(), -1),
                    std::invalid_argument);
    CHECK(backward_induction(riskdp::test::make_gamble(), 0).values[0] ==
          std::vector<double>{0.0, 0.0, 0.0});
}
