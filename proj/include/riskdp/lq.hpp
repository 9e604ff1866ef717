#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "riskdp/risk.hpp"

namespace riskdp {

/**
 * Scalar linear-quadratic test bench: dynamics x' = x + a + Z with
 * Z ~ N(0, noise_std^2), stage cost x^2 + a^2 over `horizon` stages, no
 * terminal cost. Noise is drawn from mt19937_64 via Box-Muller, one variate
 * per stage, so a seed fixes the whole trajectory.
 */
struct LqParams {
    int horizon = 1;
    RiskLevel alpha{0.95};
    double noise_std = 1.0;
    double x0 = 0.0;
    int sample_count = 1;
    std::uint64_t seed = 0;
};

/// Throws std::invalid_argument on nonpositive horizon, sample count or noise.
void validate_params(const LqParams& params);

/**
 * Exact solution of the risk-neutral problem. With J_n(x) = K_n x^2 + b_n:
 *   K_N = 0,  K_n = K_{n+1} / (1 + K_{n+1}) + 1,
 *   a_n = -K_{n+1} / (1 + K_{n+1}) * x,
 *   b_n = b_{n+1} + K_{n+1} * noise_var (so b_n sums the later K's for unit
 *   noise).
 */
struct RiccatiTable {
    std::vector<double> coefficient;  ///< K_0..K_N
    std::vector<double> gain;         ///< multiplies x at stages 0..N-1
    std::vector<double> offset;       ///< b_0..b_N for unit noise variance

    int horizon() const { return static_cast<int>(gain.size()); }
    /// Optimal expected cost-to-go from x at stage n (unit noise).
    double value(int n, double x) const { return coefficient[n] * x * x + offset[n]; }
};

RiccatiTable riccati_recursion(int horizon);

/// Stage-feedback rule on the scalar system. reset() runs once per
/// trajectory, so implementations may carry per-path state.
class LqPolicy {
  public:
    virtual ~LqPolicy() = default;
    virtual void reset() {}
    virtual double action(int stage, double x) = 0;
    /// Stage at which a mode switch happened on the last trajectory, -1 if none.
    virtual int switch_stage() const { return -1; }
};

/// a = 0 everywhere.
class LqZeroPolicy final : public LqPolicy {
  public:
    double action(int, double) override { return 0.0; }
};

/// The risk-neutral linear feedback a = gain_n * x.
class LqNeutralPolicy final : public LqPolicy {
  public:
    explicit LqNeutralPolicy(RiccatiTable table) : table_(std::move(table)) {}
    double action(int stage, double x) override { return table_.gain[stage] * x; }

  private:
    RiccatiTable table_;
};

LqNeutralPolicy lq_neutral_policy(const RiccatiTable& table);

/**
 * Budget-tracking heuristic: plays a = 0 while the running budget (s0 minus
 * the accumulated squared states) stays positive, and switches permanently to
 * the risk-neutral feedback at the first stage where it is <= 0. Because the
 * Riccati gain depends only on the stages remaining, switching mid-run plays
 * exactly the neutral rule for the residual problem.
 */
class LqHeuristicPolicy final : public LqPolicy {
  public:
    LqHeuristicPolicy(RiccatiTable table, double s0);
    void reset() override;
    double action(int stage, double x) override;
    int switch_stage() const override { return switch_stage_; }

  private:
    RiccatiTable table_;
    double s0_;
    double budget_;
    int switch_stage_;
};

struct LqTrajectory {
    std::vector<double> states;  ///< x_0..x_N
    std::vector<double> actions;
    std::vector<double> stage_costs;  ///< x_n^2 + a_n^2
    double total_cost = 0.0;
    int switch_stage = -1;
};

/// One trajectory under the policy; `seed` fixes the noise sequence.
LqTrajectory simulate_lq(const LqParams& params, LqPolicy& policy, std::uint64_t seed);

/**
 * Empirical Value-at-Risk of the do-nothing total cost sum of x_n^2 at level
 * params.alpha, from params.sample_count trajectories. Trajectory i draws its
 * seed from stream 1 of params.seed, keeping these estimation draws disjoint
 * from policy-evaluation draws (stream 0).
 */
double estimate_global_s(const LqParams& params);

/// Runs the budget heuristic once from budget s0 with the given noise seed.
LqTrajectory run_lq_avar_heuristic(const LqParams& params, double s0, std::uint64_t seed);

struct LqMcSummary {
    double mean = 0.0;
    double mean_se = 0.0;  ///< classic s / sqrt(M)
    double value_at_risk = 0.0;
    double value_at_risk_se = 0.0;  ///< batch means
    double avar = 0.0;
    double avar_se = 0.0;  ///< batch means
    int batches = 0;
};

/**
 * Monte Carlo summary of the policy's total cost at level params.alpha over
 * params.sample_count trajectories (trajectory i seeded from stream 0,
 * index i of params.seed). Tail statistics get batch-means standard errors
 * over min(100, M) contiguous batches; with fewer than two batches the SEs
 * are reported as zero.
 */
LqMcSummary mc_evaluate_policy_avar(LqPolicy& policy, const LqParams& params);

}  // namespace riskdp
