#pragma once

#include <cstdint>
#include <vector>

#include "riskdp/mdp.hpp"

namespace riskdp {

/// One simulated path: states x_0..x_N plus the action and stage cost of each
/// of the N steps. total_cost is the running sum of stage_costs.
struct RolloutTrace {
    std::vector<int> states;
    std::vector<int> actions;
    std::vector<double> stage_costs;
    double total_cost = 0.0;
};

/**
 * Simulates `horizon` transitions from x0 under the policy, drawing from
 * std::mt19937_64 seeded with `seed` (one uniform per transition, successors
 * sampled by inverse CDF in ascending state order). Identical arguments give
 * identical traces. Throws if the policy returns an inadmissible action.
 */
RolloutTrace rollout(const FiniteMdp& mdp, const MarkovPolicy& policy, int x0, int horizon,
                     std::uint64_t seed);
RolloutTrace rollout(const FiniteMdp& mdp, const StationaryPolicy& policy, int x0, int horizon,
                     std::uint64_t seed);

}  // namespace riskdp
