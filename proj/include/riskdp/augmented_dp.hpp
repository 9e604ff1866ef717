#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "riskdp/enumeration.hpp"
#include "riskdp/mdp.hpp"
#include "riskdp/risk.hpp"
#include "riskdp/rollout.hpp"

namespace riskdp {

inline constexpr std::size_t kDefaultGridCellCap = 20'000'000;

/// Thrown when a requested budget grid would exceed the configured cell cap.
class GridCapError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/**
 * Uniform grid over the budget coordinate s. Every point is an exact integer
 * multiple of the step, zero is always a grid point, and the requested range
 * is extended outward to the enclosing multiples. s_min <= 0 <= s_max is
 * required: the zero point anchors the exact left-tail extension of the value
 * tables (see AugmentedValueTable::eval).
 */
class SGrid {
  public:
    SGrid(double s_min, double s_max, double step);

    long size() const { return hi_ - lo_ + 1; }
    double step() const { return step_; }
    long zero_index() const { return -lo_; }
    double value(long index) const { return static_cast<double>(lo_ + index) * step_; }
    double min_value() const { return value(0); }
    double max_value() const { return value(size() - 1); }
    /// Index of the grid point closest to s, clamped to the grid.
    long nearest_index(double s) const;

  private:
    long lo_;  // lowest multiple of step, <= 0
    long hi_;  // highest multiple of step, >= 0
    double step_;
};

/**
 * Grid sized for a `horizon`-stage run: budgets in [-margin, horizon *
 * max_cost + margin], snapped outward. Refuses with GridCapError (including a
 * memory estimate) if the per-stage table over (state, s) would exceed
 * `max_cells`.
 */
SGrid build_sgrid(const FiniteMdp& mdp, int horizon, double step, double margin,
                  std::size_t max_cells = kDefaultGridCellCap);

/// Throws GridCapError if a table over (state, grid) would exceed max_cells.
void ensure_grid_capacity(const SGrid& grid, int state_count, std::size_t max_cells);

/**
 * One stage of the shortfall value w(x, s) = inf E[(remaining cost - s)^+],
 * sampled on a budget grid. `stage` counts the backups applied to the
 * terminal condition.
 *
 * eval continues the table off-grid: linear interpolation between neighbors,
 * the slope -1 extension w(x, s) = w(x, s_min) + (s_min - s) to the left, and
 * the edge value to the right. The left rule is exact, not an approximation:
 * every table built here satisfies w(x, s) = w(x, 0) - s for s <= 0, and
 * s_min <= 0 is a grid invariant. Arguments that land on a grid point return
 * the stored value untouched.
 */
class AugmentedValueTable {
  public:
    AugmentedValueTable(SGrid grid, int state_count, int stage);

    const SGrid& grid() const { return grid_; }
    int state_count() const { return state_count_; }
    int stage() const { return stage_; }

    double at(int state, long index) const {
        return values_[static_cast<std::size_t>(state) * grid_.size() + index];
    }
    double& at(int state, long index) {
        return values_[static_cast<std::size_t>(state) * grid_.size() + index];
    }
    double eval(int state, double s) const;

  private:
    SGrid grid_;
    int state_count_;
    int stage_;
    std::vector<double> values_;
};

/// Terminal condition w_0(x, s) = (-s)^+, the same for every state.
AugmentedValueTable terminal_table(const FiniteMdp& mdp, const SGrid& grid);

/**
 * Decision rule on (stage, state, budget). Budgets are resolved to the
 * nearest grid point, which is exact whenever the run stays on the grid
 * (integer costs on an integer grid). A stationary rule stores one slice and
 * ignores the stage argument.
 */
struct AugmentedPolicy {
    SGrid grid{0.0, 0.0, 1.0};
    bool stationary = false;
    /// decision[n][x * grid.size() + i]
    std::vector<std::vector<int>> decision;

    int horizon() const { return static_cast<int>(decision.size()); }
    int action(int stage, int state, double s) const;
};

struct BellmanBackupResult {
    AugmentedValueTable table;
    /// greedy[x * grid.size() + i], ties to the lowest action index.
    std::vector<int> greedy;
};

/**
 * One application of the budget-augmented optimality operator:
 *   (T v)(x, s) = min_a sum_x' Q(x'|x, a) v(x', s - c(x, a)).
 * The shifted budget is evaluated through v's off-grid rules.
 */
BellmanBackupResult bellman_backup(const FiniteMdp& mdp, const AugmentedValueTable& next);

struct FiniteAugmentedSolution {
    SGrid grid{0.0, 0.0, 1.0};
    /// tables[k] is the terminal condition after k backups; tables[N] = w_N.
    std::vector<AugmentedValueTable> tables;
    /// Time-indexed rule: the decision at stage n comes from backup N - n.
    AugmentedPolicy policy;
};

/// N-stage shortfall tables plus the greedy policy, by backward induction on
/// the augmented state (x, s).
FiniteAugmentedSolution solve_w_finite(const FiniteMdp& mdp, int horizon, const SGrid& grid);

struct InfiniteAugmentedSolution {
    SGrid grid{0.0, 0.0, 1.0};
    AugmentedValueTable table;
    AugmentedPolicy policy;  // stationary
    int iterations = 0;
    double final_increment = 0.0;
};

/**
 * Fixed point of the augmented operator by monotone iteration from the
 * terminal condition. Requires the same almost-sure absorption condition as
 * value_iteration_infinite; throws ConvergenceError when the sup-norm
 * increment stays above `tolerance`.
 */
InfiniteAugmentedSolution solve_w_infinite(const FiniteMdp& mdp, const SGrid& grid,
                                           double tolerance = 1e-9, int max_iterations = 100000);

struct OuterMinimum {
    double s_star = 0.0;
    double avar = 0.0;
};

/// Minimizes s + w(x0, s) / (1 - alpha) over the grid points; ties within
/// 1e-9 of the minimum resolve to the smallest s.
OuterMinimum outer_minimize_avar(const AugmentedValueTable& table, int x0, RiskLevel level);

struct AvarSolveConfig {
    double s_step = 1.0;
    double margin = 2.0;
    std::size_t max_cells = kDefaultGridCellCap;
    /// Infinite horizon only.
    double tolerance = 1e-9;
    int max_iterations = 100000;
    /// Infinite horizon only: grid upper end. Unset means the safe default
    /// bound u(x0) / (1 - alpha) + margin, where u is the risk-neutral value;
    /// the optimal budget can never exceed the optimal risk-averse cost, and
    /// that cost is at most this quotient.
    std::optional<double> s_max_override;
};

struct AvarSolution {
    double avar = 0.0;
    double s_star = 0.0;
    int horizon = -1;  ///< -1 for the infinite-horizon variant
    SGrid grid{0.0, 0.0, 1.0};
    AugmentedPolicy policy;
    /// Finite horizon: w_0..w_N. Infinite horizon: the fixed point alone.
    std::vector<AugmentedValueTable> tables;
    int iterations = 0;
    double final_increment = 0.0;
};

/// Full pipeline: build the grid, run the backups, minimize the outer
/// objective at x0.
AvarSolution solve_avar(const FiniteMdp& mdp, int x0, int horizon, RiskLevel level,
                        const AvarSolveConfig& config = {});
AvarSolution solve_avar_infinite(const FiniteMdp& mdp, int x0, RiskLevel level,
                                 const AvarSolveConfig& config = {});

/// Simulates the augmented policy from (x0, s0); the budget is threaded
/// exactly as s_{n+1} = s_n - c(x_n, a_n).
RolloutTrace rollout(const FiniteMdp& mdp, const AugmentedPolicy& policy, int x0, int horizon,
                     double s0, std::uint64_t seed);

/// Exact law of the total cost under the augmented policy started at (x0, s0).
CostDistribution exact_cost_distribution(const FiniteMdp& mdp, const AugmentedPolicy& policy,
                                         int x0, int horizon, double s0,
                                         std::uint64_t path_cap = kDefaultEnumerationCap);

/// CSV rows stage,state,s,value,greedy_action for every stored table slice.
void write_table_csv(std::ostream& out, const AvarSolution& solution);
/// CSV rows stage,state,s,action.
void write_policy_csv(std::ostream& out, const AvarSolution& solution);

}  // namespace riskdp
