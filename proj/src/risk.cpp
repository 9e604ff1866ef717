#include "riskdp/risk.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace riskdp {

namespace {
constexpr double kCdfSlack = 1e-12;
constexpr double kMinimizerTieTol = 1e-9;
}  // namespace

RiskLevel::RiskLevel(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha) || !(alpha > 0.0) || !(alpha < 1.0)) {
        std::ostringstream msg;
        msg << "RiskLevel: alpha = " << alpha << " outside (0, 1)";
        throw std::invalid_argument(msg.str());
    }
}

double value_at_risk(const CostDistribution& dist, RiskLevel level) {
    double cum = 0.0;
    for (const CostAtom& a : dist.atoms()) {
        cum += a.probability;
        if (cum + kCdfSlack >= level.alpha()) {
            return a.value;
        }
    }
    return dist.max_value();
}

double average_value_at_risk(const CostDistribution& dist, RiskLevel level) {
    const auto& atoms = dist.atoms();
    double cum = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double lo = std::max(cum, level.alpha());
        // The final CDF value is 1 by construction; pinning it avoids drift.
        const double hi = (i + 1 == atoms.size()) ? 1.0 : cum + atoms[i].probability;
        if (hi > lo) {
            acc += atoms[i].value * (hi - lo);
        }
        cum += atoms[i].probability;
    }
    return acc / level.tail();
}

double rockafellar_objective(const CostDistribution& dist, double s, RiskLevel level) {
    double excess = 0.0;
    for (const CostAtom& a : dist.atoms()) {
        if (a.value > s) {
            excess += a.probability * (a.value - s);
        }
    }
    return s + excess / level.tail();
}

AvarMinimization avar_via_minimization(const CostDistribution& dist, RiskLevel level) {
    // The objective is piecewise linear with slope breaks only at atom values
    // and slope 1 beyond the largest atom, so the atom values are a complete
    // candidate set for the minimum.
    double best = std::numeric_limits<double>::infinity();
    for (const CostAtom& a : dist.atoms()) {
        best = std::min(best, rockafellar_objective(dist, a.value, level));
    }
    for (const CostAtom& a : dist.atoms()) {
        if (rockafellar_objective(dist, a.value, level) <= best + kMinimizerTieTol) {
            return {a.value, best};
        }
    }
    return {dist.max_value(), best};  // unreachable
}

}  // namespace riskdp
