#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "riskdp/enumeration.hpp"
#include "riskdp/mdp.hpp"
#include "riskdp/risk.hpp"

namespace riskdp {

/**
 * Brute-force reference implementations. Everything here recomputes values by
 * explicit enumeration (policies as mixed-radix counters, expectations as
 * path sums) and shares no machinery with the dynamic-programming solvers it
 * is used to check. All enumerations refuse, with EnumerationCapError, once
 * they exceed their cap.
 */

/// Augmented states (x, s) with positive reach probability under some action
/// sequence, per stage 0..horizon. s evolves as s - c(x, a); budgets closer
/// than 1e-9 are identified. Each stage is sorted by (state, s).
struct ReachableAugmented {
    std::vector<std::vector<std::pair<int, double>>> per_stage;
};

ReachableAugmented reachable_augmented_states(const FiniteMdp& mdp, int x0, int horizon,
                                              double s0,
                                              std::uint64_t pair_cap = kDefaultEnumerationCap);

struct OracleExpectedResult {
    double value = 0.0;
    MarkovPolicy policy;  ///< unreachable (stage, state) slots hold the first admissible action
    std::vector<std::vector<int>> reachable_states;
};

/// Exhaustive minimum of the expected total cost over deterministic Markov
/// policies; the lexicographically first minimizer is kept, which picks the
/// lowest action index at every reachable decision point.
OracleExpectedResult oracle_min_expected(const FiniteMdp& mdp, int x0, int horizon,
                                         std::uint64_t policy_cap = kDefaultEnumerationCap);

struct OracleAvarResult {
    double avar = 0.0;
    double s_star = 0.0;
    /// Candidate budgets, sorted ascending, aligned with inner_values.
    std::vector<double> candidates;
    /// min over policies of E[(C - s)^+] per candidate.
    std::vector<double> inner_values;
    /// Decision points of the winning candidate's run, stages 0..horizon.
    ReachableAugmented reachable;
    /// Optimal action per reachable point, stages 0..horizon-1.
    std::vector<std::vector<int>> decisions;

    /// Action at a reachable point; budgets match within `tol`.
    int action_at(int stage, int state, double s, double tol = 1e-9) const;
};

/**
 * Reference value of the budget-augmented objective: for every candidate s,
 * minimizes E[(C - s)^+] by enumerating all deterministic policies on the
 * reachable augmented states, then minimizes s + inner / (1 - alpha) over the
 * candidates (ties within 1e-9 to the smallest s). On instances whose costs
 * fall on the candidate grid this is the exact optimum.
 */
OracleAvarResult oracle_min_avar(const FiniteMdp& mdp, int x0, int horizon, RiskLevel level,
                                 const std::vector<double>& s_candidates,
                                 std::uint64_t policy_cap = kDefaultEnumerationCap);

}  // namespace riskdp
