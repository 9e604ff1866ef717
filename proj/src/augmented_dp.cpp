#include "riskdp/augmented_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "riskdp/io_util.hpp"
#include "riskdp/neutral_dp.hpp"
#include "riskdp/random.hpp"

namespace riskdp {

namespace {
constexpr double kActionTieTol = 1e-12;
constexpr double kOuterTieTol = 1e-9;
constexpr double kSnapEps = 1e-9;
constexpr double kMaxIndexMagnitude = 4.0e15;  // cast to long must stay exact
}  // namespace

SGrid::SGrid(double s_min, double s_max, double step) : step_(step) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument("SGrid: step must be positive and finite");
    }
    if (!std::isfinite(s_min) || !std::isfinite(s_max) || s_min > 0.0 || s_max < 0.0) {
        std::ostringstream msg;
        msg << "SGrid: need s_min <= 0 <= s_max, got [" << s_min << ", " << s_max << "]";
        throw std::invalid_argument(msg.str());
    }
    // Snap outward; the epsilon forgives float noise just inside a multiple.
    const double lo = std::floor(s_min / step + kSnapEps);
    const double hi = std::ceil(s_max / step - kSnapEps);
    if (std::abs(lo) > kMaxIndexMagnitude || std::abs(hi) > kMaxIndexMagnitude) {
        std::ostringstream msg;
        msg << "SGrid: range [" << s_min << ", " << s_max << "] at step " << step
            << " spans too many points to index";
        throw GridCapError(msg.str());
    }
    lo_ = std::min(static_cast<long>(lo), 0L);
    hi_ = std::max(static_cast<long>(hi), 0L);
}

long SGrid::nearest_index(double s) const {
    const double pos = s / step_;
    if (pos <= static_cast<double>(lo_)) {
        return 0;
    }
    if (pos >= static_cast<double>(hi_)) {
        return size() - 1;
    }
    return std::lround(pos - static_cast<double>(lo_));
}

void ensure_grid_capacity(const SGrid& grid, int state_count, std::size_t max_cells) {
    const double cells = static_cast<double>(grid.size()) * state_count;
    if (cells > static_cast<double>(max_cells)) {
        std::ostringstream msg;
        msg << "grid cap exceeded: " << grid.size() << " budget points x " << state_count
            << " states = " << cells << " cells (~" << cells * 8.0 / (1024.0 * 1024.0 * 1024.0)
            << " GiB per table), cap is " << max_cells
            << "; coarsen the step, shrink the range, or raise the cap";
        throw GridCapError(msg.str());
    }
}

SGrid build_sgrid(const FiniteMdp& mdp, int horizon, double step, double margin,
                  std::size_t max_cells) {
    if (horizon < 0) {
        throw std::invalid_argument("build_sgrid: negative horizon");
    }
    if (!(margin >= 0.0) || !std::isfinite(margin)) {
        throw std::invalid_argument("build_sgrid: margin must be nonnegative");
    }
    SGrid grid(-margin, static_cast<double>(horizon) * mdp.max_cost() + margin, step);
    ensure_grid_capacity(grid, mdp.state_count(), max_cells);
    return grid;
}

AugmentedValueTable::AugmentedValueTable(SGrid grid, int state_count, int stage)
    : grid_(grid), state_count_(state_count), stage_(stage) {
    if (state_count < 1) {
        throw std::invalid_argument("AugmentedValueTable: state_count must be positive");
    }
    values_.assign(static_cast<std::size_t>(state_count) * grid_.size(), 0.0);
}

double AugmentedValueTable::eval(int state, double s) const {
    const long n = grid_.size();
    const double lo = grid_.min_value();
    if (s <= lo) {
        return at(state, 0) + (lo - s);
    }
    const double hi = grid_.max_value();
    if (s >= hi) {
        return at(state, n - 1);
    }
    const double pos = (s - lo) / grid_.step();
    long i = static_cast<long>(pos);
    if (i > n - 2) {
        i = n - 2;
    }
    const double frac = pos - static_cast<double>(i);
    if (frac == 0.0) {
        return at(state, i);
    }
    return (1.0 - frac) * at(state, i) + frac * at(state, i + 1);
}

AugmentedValueTable terminal_table(const FiniteMdp& mdp, const SGrid& grid) {
    AugmentedValueTable table(grid, mdp.state_count(), 0);
    for (long i = 0; i < grid.size(); ++i) {
        const double s = grid.value(i);
        const double v = s < 0.0 ? -s : 0.0;
        for (int x = 0; x < mdp.state_count(); ++x) {
            table.at(x, i) = v;
        }
    }
    return table;
}

int AugmentedPolicy::action(int stage, int state, double s) const {
    if (decision.empty()) {
        throw std::logic_error("AugmentedPolicy: no decision slices");
    }
    const auto& slice = stationary ? decision.front() : decision.at(stage);
    return slice.at(static_cast<std::size_t>(state) * grid.size() + grid.nearest_index(s));
}

BellmanBackupResult bellman_backup(const FiniteMdp& mdp, const AugmentedValueTable& next) {
    const SGrid& grid = next.grid();
    const long n = grid.size();
    BellmanBackupResult out{
        AugmentedValueTable(grid, mdp.state_count(), next.stage() + 1),
        std::vector<int>(static_cast<std::size_t>(mdp.state_count()) * n, -1)};
    for (int x = 0; x < mdp.state_count(); ++x) {
        if (mdp.admissible(x).empty()) {
            std::ostringstream msg;
            msg << "bellman_backup: state " << x << " has no admissible action";
            throw std::invalid_argument(msg.str());
        }
        for (long i = 0; i < n; ++i) {
            const double s = grid.value(i);
            double best = std::numeric_limits<double>::infinity();
            int best_a = -1;
            for (int a : mdp.admissible(x)) {
                const TransitionRow& row = mdp.transitions(x, a);
                if (row.empty()) {
                    std::ostringstream msg;
                    msg << "bellman_backup: kernel row (x=" << x << ", a=" << a
                        << ") has no successors";
                    throw std::invalid_argument(msg.str());
                }
                const double shifted = s - mdp.cost(x, a);
                double v = 0.0;
                for (std::size_t j = 0; j < row.size(); ++j) {
                    v += row.probabilities[j] * next.eval(row.next_states[j], shifted);
                }
                if (v < best - kActionTieTol) {
                    best = v;
                    best_a = a;
                }
            }
            out.table.at(x, i) = best;
            out.greedy[static_cast<std::size_t>(x) * n + i] = best_a;
        }
    }
    return out;
}

FiniteAugmentedSolution solve_w_finite(const FiniteMdp& mdp, int horizon, const SGrid& grid) {
    if (horizon < 0) {
        throw std::invalid_argument("solve_w_finite: negative horizon");
    }
    FiniteAugmentedSolution sol;
    sol.grid = grid;
    sol.policy.grid = grid;
    sol.policy.stationary = false;
    sol.policy.decision.assign(horizon, {});
    sol.tables.reserve(horizon + 1);
    sol.tables.push_back(terminal_table(mdp, grid));
    for (int k = 1; k <= horizon; ++k) {
        BellmanBackupResult step = bellman_backup(mdp, sol.tables.back());
        sol.tables.push_back(std::move(step.table));
        // k backups of remaining value serve the decision at time N - k.
        sol.policy.decision[horizon - k] = std::move(step.greedy);
    }
    return sol;
}

InfiniteAugmentedSolution solve_w_infinite(const FiniteMdp& mdp, const SGrid& grid,
                                           double tolerance, int max_iterations) {
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("solve_w_infinite: tolerance must be positive");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("solve_w_infinite: max_iterations must be positive");
    }
    {
        const std::vector<int> missing = states_missing_absorption(mdp);
        if (!missing.empty()) {
            std::ostringstream msg;
            msg << "solve_w_infinite: no policy reaches a zero-cost absorbing state almost "
                   "surely from state(s)";
            for (int x : missing) {
                msg << ' ' << x;
            }
            msg << "; the shortfall iteration would diverge";
            throw std::invalid_argument(msg.str());
        }
    }
    AugmentedValueTable current = terminal_table(mdp, grid);
    for (int it = 1; it <= max_iterations; ++it) {
        BellmanBackupResult step = bellman_backup(mdp, current);
        double increment = 0.0;
        for (int x = 0; x < mdp.state_count(); ++x) {
            for (long i = 0; i < grid.size(); ++i) {
                increment = std::max(increment, std::abs(step.table.at(x, i) - current.at(x, i)));
            }
        }
        current = std::move(step.table);
        if (increment <= tolerance) {
            InfiniteAugmentedSolution sol{grid, std::move(current), AugmentedPolicy{}, it,
                                          increment};
            sol.policy.grid = grid;
            sol.policy.stationary = true;
            sol.policy.decision.push_back(std::move(step.greedy));
            return sol;
        }
        if (it == max_iterations) {
            std::ostringstream msg;
            msg << "solve_w_infinite: increment " << increment << " still above tolerance "
                << tolerance << " after " << max_iterations << " iterations";
            throw ConvergenceError(msg.str(), increment);
        }
    }
    throw std::logic_error("solve_w_infinite: unreachable");
}

OuterMinimum outer_minimize_avar(const AugmentedValueTable& table, int x0, RiskLevel level) {
    if (x0 < 0 || x0 >= table.state_count()) {
        throw std::out_of_range("outer_minimize_avar: x0 out of range");
    }
    const SGrid& grid = table.grid();
    double best = std::numeric_limits<double>::infinity();
    for (long i = 0; i < grid.size(); ++i) {
        best = std::min(best, grid.value(i) + table.at(x0, i) / level.tail());
    }
    for (long i = 0; i < grid.size(); ++i) {
        const double g = grid.value(i) + table.at(x0, i) / level.tail();
        if (g <= best + kOuterTieTol) {
            return {grid.value(i), best};
        }
    }
    throw std::logic_error("outer_minimize_avar: unreachable");
}

AvarSolution solve_avar(const FiniteMdp& mdp, int x0, int horizon, RiskLevel level,
                        const AvarSolveConfig& config) {
    if (x0 < 0 || x0 >= mdp.state_count()) {
        throw std::out_of_range("solve_avar: x0 out of range");
    }
    const SGrid grid = build_sgrid(mdp, horizon, config.s_step, config.margin, config.max_cells);
    FiniteAugmentedSolution fin = solve_w_finite(mdp, horizon, grid);
    const OuterMinimum outer = outer_minimize_avar(fin.tables.back(), x0, level);
    AvarSolution sol;
    sol.avar = outer.avar;
    sol.s_star = outer.s_star;
    sol.horizon = horizon;
    sol.grid = grid;
    sol.policy = std::move(fin.policy);
    sol.tables = std::move(fin.tables);
    return sol;
}

AvarSolution solve_avar_infinite(const FiniteMdp& mdp, int x0, RiskLevel level,
                                 const AvarSolveConfig& config) {
    if (x0 < 0 || x0 >= mdp.state_count()) {
        throw std::out_of_range("solve_avar_infinite: x0 out of range");
    }
    double s_max;
    if (config.s_max_override) {
        s_max = *config.s_max_override;
        if (!std::isfinite(s_max) || s_max < 0.0) {
            throw std::invalid_argument("solve_avar_infinite: s_max override must be >= 0");
        }
    } else {
        // The optimal budget never exceeds the optimal risk-averse cost, and
        // the latter is bounded by the risk-neutral value over the tail
        // weight, so this range always contains the minimizer.
        const ValueIterationResult vi =
            value_iteration_infinite(mdp, config.tolerance, config.max_iterations);
        s_max = vi.values[x0] / level.tail() + config.margin;
    }
    const SGrid grid(-config.margin, s_max, config.s_step);
    ensure_grid_capacity(grid, mdp.state_count(), config.max_cells);
    InfiniteAugmentedSolution inf =
        solve_w_infinite(mdp, grid, config.tolerance, config.max_iterations);
    const OuterMinimum outer = outer_minimize_avar(inf.table, x0, level);
    AvarSolution sol;
    sol.avar = outer.avar;
    sol.s_star = outer.s_star;
    sol.horizon = -1;
    sol.grid = grid;
    sol.policy = std::move(inf.policy);
    sol.tables.push_back(std::move(inf.table));
    sol.iterations = inf.iterations;
    sol.final_increment = inf.final_increment;
    return sol;
}

RolloutTrace rollout(const FiniteMdp& mdp, const AugmentedPolicy& policy, int x0, int horizon,
                     double s0, std::uint64_t seed) {
    if (horizon < 0) {
        throw std::invalid_argument("rollout: negative horizon");
    }
    if (!policy.stationary && policy.horizon() < horizon) {
        throw std::invalid_argument("rollout: policy horizon shorter than requested rollout");
    }
    std::mt19937_64 gen(seed);
    RolloutTrace trace;
    trace.states.reserve(horizon + 1);
    int x = x0;
    double s = s0;
    trace.states.push_back(x);
    for (int n = 0; n < horizon; ++n) {
        const int a = policy.action(n, x, s);
        if (!mdp.is_admissible(x, a)) {
            std::ostringstream msg;
            msg << "rollout: augmented policy chose inadmissible action " << a << " at state "
                << x << ", stage " << n;
            throw std::invalid_argument(msg.str());
        }
        const TransitionRow& row = mdp.transitions(x, a);
        if (row.empty()) {
            std::ostringstream msg;
            msg << "rollout: kernel row (x=" << x << ", a=" << a << ") has no successors";
            throw std::invalid_argument(msg.str());
        }
        const double c = mdp.cost(x, a);
        trace.actions.push_back(a);
        trace.stage_costs.push_back(c);
        trace.total_cost += c;
        s -= c;
        x = row.next_states[sample_index(gen, row.probabilities)];
        trace.states.push_back(x);
    }
    return trace;
}

namespace {

struct AugmentedWalker {
    const FiniteMdp& mdp;
    const AugmentedPolicy& policy;
    int horizon;
    std::uint64_t path_cap;
    std::uint64_t leaves = 0;
    std::vector<CostAtom> atoms;

    void walk(int n, int x, double s, double cost_so_far, double prob) {
        if (n == horizon) {
            if (++leaves > path_cap) {
                std::ostringstream msg;
                msg << "exact_cost_distribution: more than " << path_cap
                    << " paths; raise the cap or shrink the instance";
                throw EnumerationCapError(msg.str());
            }
            atoms.push_back({cost_so_far, prob});
            return;
        }
        const int a = policy.action(n, x, s);
        if (!mdp.is_admissible(x, a)) {
            std::ostringstream msg;
            msg << "exact_cost_distribution: augmented policy chose inadmissible action " << a
                << " at state " << x << ", stage " << n;
            throw std::invalid_argument(msg.str());
        }
        const TransitionRow& row = mdp.transitions(x, a);
        const double c = mdp.cost(x, a);
        for (std::size_t j = 0; j < row.size(); ++j) {
            walk(n + 1, row.next_states[j], s - c, cost_so_far + c,
                 prob * row.probabilities[j]);
        }
    }
};

}  // namespace

CostDistribution exact_cost_distribution(const FiniteMdp& mdp, const AugmentedPolicy& policy,
                                         int x0, int horizon, double s0,
                                         std::uint64_t path_cap) {
    if (horizon < 0) {
        throw std::invalid_argument("exact_cost_distribution: negative horizon");
    }
    if (!policy.stationary && policy.horizon() < horizon) {
        throw std::invalid_argument("exact_cost_distribution: policy horizon too short");
    }
    AugmentedWalker walker{mdp, policy, horizon, path_cap, 0, {}};
    walker.walk(0, x0, s0, 0.0, 1.0);
    return CostDistribution(std::move(walker.atoms));
}

namespace {

// Stage slices present in the solution: 0..N-1 for finite runs, the single
// stationary slice for infinite runs.
int slice_count(const AvarSolution& sol) {
    return sol.horizon >= 0 ? sol.horizon : 1;
}

const AugmentedValueTable& slice_table(const AvarSolution& sol, int n) {
    return sol.horizon >= 0 ? sol.tables[sol.horizon - n] : sol.tables.front();
}

}  // namespace

void write_table_csv(std::ostream& out, const AvarSolution& sol) {
    out << "stage,state,s,value,greedy_action\n";
    const long n_points = sol.grid.size();
    for (int n = 0; n < slice_count(sol); ++n) {
        const AugmentedValueTable& table = slice_table(sol, n);
        const auto& slice = sol.policy.decision[n];
        for (int x = 0; x < table.state_count(); ++x) {
            for (long i = 0; i < n_points; ++i) {
                out << n << ',' << x << ',' << format_double(sol.grid.value(i)) << ','
                    << format_double(table.at(x, i)) << ','
                    << slice[static_cast<std::size_t>(x) * n_points + i] << '\n';
            }
        }
    }
}

void write_policy_csv(std::ostream& out, const AvarSolution& sol) {
    out << "stage,state,s,action\n";
    const long n_points = sol.grid.size();
    for (int n = 0; n < slice_count(sol); ++n) {
        const auto& slice = sol.policy.decision[n];
        for (int x = 0; x < sol.tables.front().state_count(); ++x) {
            for (long i = 0; i < n_points; ++i) {
                out << n << ',' << x << ',' << format_double(sol.grid.value(i)) << ','
                    << slice[static_cast<std::size_t>(x) * n_points + i] << '\n';
            }
        }
    }
}

}  // namespace riskdp
