#include "riskdp/lq.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "riskdp/random.hpp"

namespace riskdp {

namespace {
// Seed streams: keep policy-evaluation noise disjoint from the draws used to
// estimate the global budget.
constexpr std::uint64_t kEvaluateStream = 0;
constexpr std::uint64_t kEstimateStream = 1;

std::uint64_t trajectory_seed(const LqParams& params, std::uint64_t stream, int index) {
    return derive_seed(derive_seed(params.seed, stream), static_cast<std::uint64_t>(index));
}

double sample_sd(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) {
        return 0.0;
    }
    double acc = 0.0;
    for (double v : xs) {
        acc += (v - mean) * (v - mean);
    }
    return std::sqrt(acc / (static_cast<double>(xs.size()) - 1.0));
}

}  // namespace

void validate_params(const LqParams& params) {
    if (params.horizon < 1) {
        throw std::invalid_argument("LqParams: horizon must be at least 1");
    }
    if (params.sample_count < 1) {
        throw std::invalid_argument("LqParams: sample_count must be at least 1");
    }
    if (!(params.noise_std > 0.0) || !std::isfinite(params.noise_std)) {
        throw std::invalid_argument("LqParams: noise_std must be positive");
    }
    if (!std::isfinite(params.x0)) {
        throw std::invalid_argument("LqParams: x0 must be finite");
    }
}

RiccatiTable riccati_recursion(int horizon) {
    if (horizon < 1) {
        throw std::invalid_argument("riccati_recursion: horizon must be at least 1");
    }
    RiccatiTable table;
    table.coefficient.assign(horizon + 1, 0.0);
    table.gain.assign(horizon, 0.0);
    table.offset.assign(horizon + 1, 0.0);
    for (int n = horizon - 1; n >= 0; --n) {
        const double next = table.coefficient[n + 1];
        table.coefficient[n] = next / (1.0 + next) + 1.0;
        table.gain[n] = -next / (1.0 + next);
        table.offset[n] = table.offset[n + 1] + next;
    }
    return table;
}

LqNeutralPolicy lq_neutral_policy(const RiccatiTable& table) { return LqNeutralPolicy(table); }

LqHeuristicPolicy::LqHeuristicPolicy(RiccatiTable table, double s0)
    : table_(std::move(table)), s0_(s0), budget_(s0), switch_stage_(-1) {}

void LqHeuristicPolicy::reset() {
    budget_ = s0_;
    switch_stage_ = -1;
}

double LqHeuristicPolicy::action(int stage, double x) {
    if (switch_stage_ < 0 && budget_ <= 0.0) {
        switch_stage_ = stage;
    }
    if (switch_stage_ >= 0) {
        return table_.gain[stage] * x;
    }
    budget_ -= x * x;
    return 0.0;
}

LqTrajectory simulate_lq(const LqParams& params, LqPolicy& policy, std::uint64_t seed) {
    validate_params(params);
    std::mt19937_64 gen(seed);
    policy.reset();
    LqTrajectory traj;
    traj.states.reserve(params.horizon + 1);
    traj.actions.reserve(params.horizon);
    traj.stage_costs.reserve(params.horizon);
    double x = params.x0;
    traj.states.push_back(x);
    for (int n = 0; n < params.horizon; ++n) {
        const double a = policy.action(n, x);
        const double c = x * x + a * a;
        traj.actions.push_back(a);
        traj.stage_costs.push_back(c);
        traj.total_cost += c;
        x = x + a + standard_normal(gen) * params.noise_std;
        traj.states.push_back(x);
    }
    traj.switch_stage = policy.switch_stage();
    return traj;
}

double estimate_global_s(const LqParams& params) {
    validate_params(params);
    LqZeroPolicy zero;
    std::vector<double> totals;
    totals.reserve(params.sample_count);
    for (int i = 0; i < params.sample_count; ++i) {
        totals.push_back(
            simulate_lq(params, zero, trajectory_seed(params, kEstimateStream, i)).total_cost);
    }
    return value_at_risk(to_empirical(totals), params.alpha);
}

LqTrajectory run_lq_avar_heuristic(const LqParams& params, double s0, std::uint64_t seed) {
    validate_params(params);
    LqHeuristicPolicy policy(riccati_recursion(params.horizon), s0);
    return simulate_lq(params, policy, seed);
}

LqMcSummary mc_evaluate_policy_avar(LqPolicy& policy, const LqParams& params) {
    validate_params(params);
    const int m = params.sample_count;
    std::vector<double> totals;
    totals.reserve(m);
    for (int i = 0; i < m; ++i) {
        totals.push_back(
            simulate_lq(params, policy, trajectory_seed(params, kEvaluateStream, i)).total_cost);
    }
    LqMcSummary summary;
    double mean = 0.0;
    for (double v : totals) {
        mean += v;
    }
    mean /= static_cast<double>(m);
    summary.mean = mean;
    summary.mean_se = sample_sd(totals, mean) / std::sqrt(static_cast<double>(m));

    const CostDistribution dist = to_empirical(totals);
    summary.value_at_risk = value_at_risk(dist, params.alpha);
    summary.avar = average_value_at_risk(dist, params.alpha);

    const int batches = std::min(100, m);
    summary.batches = batches;
    if (batches >= 2) {
        std::vector<double> var_stats;
        std::vector<double> avar_stats;
        var_stats.reserve(batches);
        avar_stats.reserve(batches);
        for (int b = 0; b < batches; ++b) {
            const int begin = static_cast<int>(static_cast<long long>(b) * m / batches);
            const int end = static_cast<int>(static_cast<long long>(b + 1) * m / batches);
            const std::vector<double> chunk(totals.begin() + begin, totals.begin() + end);
            const CostDistribution batch_dist = to_empirical(chunk);
            var_stats.push_back(value_at_risk(batch_dist, params.alpha));
            avar_stats.push_back(average_value_at_risk(batch_dist, params.alpha));
        }
        double var_mean = 0.0;
        double avar_mean = 0.0;
        for (int b = 0; b < batches; ++b) {
            var_mean += var_stats[b];
            avar_mean += avar_stats[b];
        }
        var_mean /= batches;
        avar_mean /= batches;
        summary.value_at_risk_se = sample_sd(var_stats, var_mean) / std::sqrt(batches);
        summary.avar_se = sample_sd(avar_stats, avar_mean) / std::sqrt(batches);
    }
    return summary;
}

}  // namespace riskdp
