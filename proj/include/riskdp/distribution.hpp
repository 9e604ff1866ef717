#pragma once

#include <cstddef>
#include <vector>

namespace riskdp {

/// One point mass of a finite cost distribution.
struct CostAtom {
    double value = 0.0;
    double probability = 0.0;
};

/**
 * Finite discrete distribution of a scalar cost.
 *
 * Canonical form: atoms sorted by increasing value, values closer than 1e-12
 * merged, all probabilities positive. Construction rejects probabilities that
 * do not sum to one within 1e-9 and renormalizes the accepted sum to exactly
 * one, so downstream identities can be checked at tight tolerances.
 */
class CostDistribution {
  public:
    explicit CostDistribution(std::vector<CostAtom> atoms);

    const std::vector<CostAtom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

    double mean() const;
    double min_value() const { return atoms_.front().value; }
    double max_value() const { return atoms_.back().value; }

    /// Law of X + offset.
    CostDistribution shifted(double offset) const;
    /// Law of factor * X for factor > 0.
    CostDistribution scaled(double factor) const;

  private:
    std::vector<CostAtom> atoms_;
};

/// Empirical distribution of a nonempty sample; each point carries mass 1/n
/// before merging.
CostDistribution to_empirical(const std::vector<double>& samples);

}  // namespace riskdp
