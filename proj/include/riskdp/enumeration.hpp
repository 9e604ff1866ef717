#pragma once

#include <cstdint>
#include <stdexcept>

#include "riskdp/distribution.hpp"
#include "riskdp/mdp.hpp"

namespace riskdp {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Thrown when an exhaustive enumeration would exceed its configured cap.
class EnumerationCapError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/**
 * Exact law of the total cost over `horizon` stages under the policy,
 * obtained by enumerating every positive-probability path. Refuses with
 * EnumerationCapError once more than `path_cap` paths would be expanded.
 */
CostDistribution exact_cost_distribution(const FiniteMdp& mdp, const MarkovPolicy& policy, int x0,
                                         int horizon,
                                         std::uint64_t path_cap = kDefaultEnumerationCap);

}  // namespace riskdp
