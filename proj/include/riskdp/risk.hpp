#pragma once

#include "riskdp/distribution.hpp"

namespace riskdp {

/// Risk level restricted to the open interval (0, 1).
class RiskLevel {
  public:
    explicit RiskLevel(double alpha);
    double alpha() const { return alpha_; }
    /// Tail weight 1 - alpha.
    double tail() const { return 1.0 - alpha_; }

  private:
    double alpha_;
};

/**
 * Value-at-Risk: the smallest atom value whose cumulative probability reaches
 * alpha. The cumulative comparison carries 1e-12 slack so that a level landing
 * exactly on a CDF step (up to accumulation error) resolves to that step.
 */
double value_at_risk(const CostDistribution& dist, RiskLevel level);

/**
 * Average-Value-at-Risk at level alpha: the average of the quantiles above
 * alpha, computed in closed form on the step quantile function as
 *   sum_i value_i * (F_i - max(F_{i-1}, alpha))^+ / (1 - alpha).
 */
double average_value_at_risk(const CostDistribution& dist, RiskLevel level);

/// Rockafellar-Uryasev objective s + E[(X - s)^+] / (1 - alpha).
double rockafellar_objective(const CostDistribution& dist, double s, RiskLevel level);

struct AvarMinimization {
    double s_star = 0.0;  ///< smallest minimizer of the objective
    double value = 0.0;   ///< minimum value; equals average_value_at_risk
};

/**
 * Minimizes the Rockafellar-Uryasev objective over s. The objective is
 * piecewise linear in s with breakpoints exactly at the atom values, so
 * scanning the atoms is an exact global search. Ties within 1e-9 of the
 * minimum resolve to the smallest s; Value-at-Risk is always a minimizer.
 */
AvarMinimization avar_via_minimization(const CostDistribution& dist, RiskLevel level);

}  // namespace riskdp
