#include "riskdp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace riskdp {

namespace {

constexpr double kBudgetMatchTol = 1e-9;
constexpr double kValueTieTol = 1e-12;
constexpr double kOuterTieTol = 1e-9;

void check_start(const FiniteMdp& mdp, int x0, int horizon) {
    if (x0 < 0 || x0 >= mdp.state_count()) {
        throw std::out_of_range("oracle: x0 out of range");
    }
    if (horizon < 0) {
        throw std::invalid_argument("oracle: negative horizon");
    }
}

// Sorted-insert of s into the budget list of one state, identifying budgets
// within tolerance. Returns false when the budget was already present.
bool insert_budget(std::vector<double>& budgets, double s) {
    auto it = std::lower_bound(budgets.begin(), budgets.end(), s - kBudgetMatchTol);
    if (it != budgets.end() && std::abs(*it - s) <= kBudgetMatchTol) {
        return false;
    }
    budgets.insert(it, s);
    return true;
}

}  // namespace

ReachableAugmented reachable_augmented_states(const FiniteMdp& mdp, int x0, int horizon,
                                              double s0, std::uint64_t pair_cap) {
    check_start(mdp, x0, horizon);
    ReachableAugmented out;
    out.per_stage.resize(horizon + 1);
    // budgets[x] holds the sorted budgets seen at the current stage.
    std::vector<std::vector<double>> budgets(mdp.state_count());
    budgets[x0].push_back(s0);
    std::uint64_t total = 0;
    for (int n = 0; n <= horizon; ++n) {
        auto& stage = out.per_stage[n];
        for (int x = 0; x < mdp.state_count(); ++x) {
            for (double s : budgets[x]) {
                stage.emplace_back(x, s);
            }
        }
        total += stage.size();
        if (total > pair_cap) {
            std::ostringstream msg;
            msg << "reachable_augmented_states: more than " << pair_cap
                << " augmented states; raise the cap or shrink the instance";
            throw EnumerationCapError(msg.str());
        }
        if (n == horizon) {
            break;
        }
        std::vector<std::vector<double>> next(mdp.state_count());
        for (int x = 0; x < mdp.state_count(); ++x) {
            for (double s : budgets[x]) {
                for (int a : mdp.admissible(x)) {
                    const double shifted = s - mdp.cost(x, a);
                    for (int y : mdp.transitions(x, a).next_states) {
                        insert_budget(next[y], shifted);
                    }
                }
            }
        }
        budgets = std::move(next);
    }
    return out;
}

namespace {

// Decision points of one policy-enumeration problem, stage-major, each with
// its admissible action list. Digits of the mixed-radix counter line up with
// the points, first point most significant, so the counter walks assignments
// in lexicographic order.
struct DecisionPoints {
    struct Point {
        int stage;
        int state;
        double budget;  // unused (0) for plain Markov enumeration
    };
    std::vector<Point> points;
    std::vector<int> radix;
    // stage_begin[n]..stage_begin[n+1] indexes the points of stage n.
    std::vector<std::size_t> stage_begin;

    double policy_count() const {
        double count = 1.0;
        for (int r : radix) {
            count *= r;
        }
        return count;
    }

    std::size_t find(int stage, int state, double budget) const {
        for (std::size_t k = stage_begin[stage]; k < stage_begin[stage + 1]; ++k) {
            if (points[k].state == state && std::abs(points[k].budget - budget) <= kBudgetMatchTol) {
                return k;
            }
        }
        throw std::logic_error("oracle: decision point not found");
    }
};

bool advance(std::vector<int>& digits, const std::vector<int>& radix) {
    for (std::size_t k = digits.size(); k-- > 0;) {
        if (++digits[k] < radix[k]) {
            return true;
        }
        digits[k] = 0;
    }
    return false;
}

void check_policy_count(const DecisionPoints& pts, std::uint64_t cap, const char* what) {
    for (std::size_t k = 0; k < pts.radix.size(); ++k) {
        if (pts.radix[k] == 0) {
            std::ostringstream msg;
            msg << what << ": reachable state " << pts.points[k].state
                << " has no admissible action";
            throw std::invalid_argument(msg.str());
        }
    }
    if (pts.policy_count() > static_cast<double>(cap)) {
        std::ostringstream msg;
        msg << what << ": about " << pts.policy_count() << " deterministic policies exceed cap "
            << cap << "; shrink the instance or raise the cap";
        throw EnumerationCapError(msg.str());
    }
}

// E[total cost] under the assignment, by direct path recursion.
double expected_cost(const FiniteMdp& mdp, const DecisionPoints& pts,
                     const std::vector<int>& digits, int horizon, int n, int x) {
    if (n == horizon) {
        return 0.0;
    }
    const std::size_t k = pts.find(n, x, 0.0);
    const int a = mdp.admissible(x)[digits[k]];
    const TransitionRow& row = mdp.transitions(x, a);
    double v = mdp.cost(x, a);
    for (std::size_t j = 0; j < row.size(); ++j) {
        v += row.probabilities[j] *
             expected_cost(mdp, pts, digits, horizon, n + 1, row.next_states[j]);
    }
    return v;
}

// E[(C - s)^+] under the assignment, tracked through the running budget.
double expected_shortfall(const FiniteMdp& mdp, const DecisionPoints& pts,
                          const std::vector<int>& digits, int horizon, int n, int x, double s) {
    if (n == horizon) {
        return s < 0.0 ? -s : 0.0;
    }
    const std::size_t k = pts.find(n, x, s);
    const int a = mdp.admissible(x)[digits[k]];
    const TransitionRow& row = mdp.transitions(x, a);
    const double shifted = s - mdp.cost(x, a);
    double v = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        v += row.probabilities[j] *
             expected_shortfall(mdp, pts, digits, horizon, n + 1, row.next_states[j], shifted);
    }
    return v;
}

struct InnerMinimum {
    double value = std::numeric_limits<double>::infinity();
    std::vector<int> digits;
};

// Minimum of E[(C - s)^+] over all assignments; keeps the lexicographically
// first minimizer (strict improvement beyond 1e-12 required to switch).
InnerMinimum minimize_shortfall(const FiniteMdp& mdp, const DecisionPoints& pts, int x0,
                                int horizon, double s0) {
    InnerMinimum best;
    std::vector<int> digits(pts.points.size(), 0);
    while (true) {
        const double v = expected_shortfall(mdp, pts, digits, horizon, 0, x0, s0);
        if (v < best.value - kValueTieTol) {
            best.value = v;
            best.digits = digits;
        }
        if (!advance(digits, pts.radix)) {
            break;
        }
    }
    return best;
}

DecisionPoints augmented_decision_points(const FiniteMdp& mdp, const ReachableAugmented& reach,
                                         int horizon) {
    DecisionPoints pts;
    pts.stage_begin.assign(horizon + 1, 0);
    for (int n = 0; n < horizon; ++n) {
        pts.stage_begin[n] = pts.points.size();
        for (const auto& [x, s] : reach.per_stage[n]) {
            pts.points.push_back({n, x, s});
            pts.radix.push_back(static_cast<int>(mdp.admissible(x).size()));
        }
    }
    pts.stage_begin[horizon] = pts.points.size();
    return pts;
}

}  // namespace

OracleExpectedResult oracle_min_expected(const FiniteMdp& mdp, int x0, int horizon,
                                         std::uint64_t policy_cap) {
    check_start(mdp, x0, horizon);
    OracleExpectedResult result;
    // Plain forward reachability, ignoring budgets.
    result.reachable_states.resize(horizon + 1);
    std::vector<char> now(mdp.state_count(), 0);
    now[x0] = 1;
    DecisionPoints pts;
    pts.stage_begin.assign(horizon + 1, 0);
    for (int n = 0; n <= horizon; ++n) {
        if (n < horizon) {
            pts.stage_begin[n] = pts.points.size();
        }
        std::vector<char> next(mdp.state_count(), 0);
        for (int x = 0; x < mdp.state_count(); ++x) {
            if (!now[x]) {
                continue;
            }
            result.reachable_states[n].push_back(x);
            if (n == horizon) {
                continue;
            }
            pts.points.push_back({n, x, 0.0});
            pts.radix.push_back(static_cast<int>(mdp.admissible(x).size()));
            for (int a : mdp.admissible(x)) {
                for (int y : mdp.transitions(x, a).next_states) {
                    next[y] = 1;
                }
            }
        }
        if (n < horizon) {
            now = std::move(next);
        }
    }
    pts.stage_begin[horizon] = pts.points.size();
    check_policy_count(pts, policy_cap, "oracle_min_expected");

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_digits;
    std::vector<int> digits(pts.points.size(), 0);
    while (true) {
        const double v = expected_cost(mdp, pts, digits, horizon, 0, x0);
        if (v < best - kValueTieTol) {
            best = v;
            best_digits = digits;
        }
        if (!advance(digits, pts.radix)) {
            break;
        }
    }
    result.value = best;
    result.policy.decision.assign(horizon, std::vector<int>(mdp.state_count(), -1));
    for (int n = 0; n < horizon; ++n) {
        for (int x = 0; x < mdp.state_count(); ++x) {
            result.policy.decision[n][x] = mdp.admissible(x).empty() ? -1 : mdp.admissible(x)[0];
        }
    }
    for (std::size_t k = 0; k < pts.points.size(); ++k) {
        const auto& p = pts.points[k];
        result.policy.decision[p.stage][p.state] = mdp.admissible(p.state)[best_digits[k]];
    }
    return result;
}

int OracleAvarResult::action_at(int stage, int state, double s, double tol) const {
    const auto& stage_points = reachable.per_stage.at(stage);
    for (std::size_t k = 0; k < stage_points.size(); ++k) {
        if (stage_points[k].first == state && std::abs(stage_points[k].second - s) <= tol) {
            return decisions.at(stage).at(k);
        }
    }
    throw std::out_of_range("OracleAvarResult::action_at: point not reachable");
}

OracleAvarResult oracle_min_avar(const FiniteMdp& mdp, int x0, int horizon, RiskLevel level,
                                 const std::vector<double>& s_candidates,
                                 std::uint64_t policy_cap) {
    check_start(mdp, x0, horizon);
    if (s_candidates.empty()) {
        throw std::invalid_argument("oracle_min_avar: no candidate budgets");
    }
    OracleAvarResult result;
    result.candidates = s_candidates;
    std::sort(result.candidates.begin(), result.candidates.end());
    result.inner_values.reserve(result.candidates.size());

    double best = std::numeric_limits<double>::infinity();
    for (double s : result.candidates) {
        const ReachableAugmented reach =
            reachable_augmented_states(mdp, x0, horizon, s, policy_cap);
        const DecisionPoints pts = augmented_decision_points(mdp, reach, horizon);
        check_policy_count(pts, policy_cap, "oracle_min_avar");
        const InnerMinimum inner = minimize_shortfall(mdp, pts, x0, horizon, s);
        result.inner_values.push_back(inner.value);
        best = std::min(best, s + inner.value / level.tail());
    }
    result.avar = best;
    for (std::size_t c = 0; c < result.candidates.size(); ++c) {
        const double s = result.candidates[c];
        if (s + result.inner_values[c] / level.tail() <= best + kOuterTieTol) {
            result.s_star = s;
            break;
        }
    }

    // Rerun the winner to keep its decision table.
    result.reachable =
        reachable_augmented_states(mdp, x0, horizon, result.s_star, policy_cap);
    const DecisionPoints pts = augmented_decision_points(mdp, result.reachable, horizon);
    const InnerMinimum inner = minimize_shortfall(mdp, pts, x0, horizon, result.s_star);
    result.decisions.assign(horizon, {});
    for (int n = 0; n < horizon; ++n) {
        for (std::size_t k = pts.stage_begin[n]; k < pts.stage_begin[n + 1]; ++k) {
            result.decisions[n].push_back(
                mdp.admissible(pts.points[k].state)[inner.digits[k]]);
        }
    }
    return result;
}

}  // namespace riskdp
