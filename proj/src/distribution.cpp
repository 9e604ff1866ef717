#include "riskdp/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace riskdp {

namespace {
constexpr double kProbSumTol = 1e-9;
constexpr double kMergeTol = 1e-12;
}  // namespace

CostDistribution::CostDistribution(std::vector<CostAtom> atoms) {
    if (atoms.empty()) {
        throw std::invalid_argument("CostDistribution: at least one atom required");
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const CostAtom& a, const CostAtom& b) { return a.value < b.value; });
    double total = 0.0;
    for (const CostAtom& a : atoms) {
        if (!std::isfinite(a.value)) {
            throw std::invalid_argument("CostDistribution: atom value not finite");
        }
        if (!(a.probability > 0.0) || !std::isfinite(a.probability)) {
            throw std::invalid_argument("CostDistribution: atom probability must be positive");
        }
        total += a.probability;
    }
    if (std::abs(total - 1.0) > kProbSumTol) {
        std::ostringstream msg;
        msg << "CostDistribution: probabilities sum to " << total << ", expected 1 within "
            << kProbSumTol;
        throw std::invalid_argument(msg.str());
    }
    atoms_.reserve(atoms.size());
    for (const CostAtom& a : atoms) {
        if (!atoms_.empty() && a.value - atoms_.back().value <= kMergeTol) {
            atoms_.back().probability += a.probability;
        } else {
            atoms_.push_back(a);
        }
    }
    // Exact no-op when the input already sums to 1.0.
    for (CostAtom& a : atoms_) {
        a.probability /= total;
    }
}

double CostDistribution::mean() const {
    double m = 0.0;
    for (const CostAtom& a : atoms_) {
        m += a.value * a.probability;
    }
    return m;
}

CostDistribution CostDistribution::shifted(double offset) const {
    std::vector<CostAtom> out = atoms_;
    for (CostAtom& a : out) {
        a.value += offset;
    }
    return CostDistribution(std::move(out));
}

CostDistribution CostDistribution::scaled(double factor) const {
    if (!(factor > 0.0)) {
        throw std::invalid_argument("CostDistribution::scaled: factor must be positive");
    }
    std::vector<CostAtom> out = atoms_;
    for (CostAtom& a : out) {
        a.value *= factor;
    }
    return CostDistribution(std::move(out));
}

CostDistribution to_empirical(const std::vector<double>& samples) {
    if (samples.empty()) {
        throw std::invalid_argument("to_empirical: empty sample");
    }
    const double mass = 1.0 / static_cast<double>(samples.size());
    std::vector<CostAtom> atoms;
    atoms.reserve(samples.size());
    for (double v : samples) {
        atoms.push_back({v, mass});
    }
    return CostDistribution(std::move(atoms));
}

}  // namespace riskdp
