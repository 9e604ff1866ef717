#include "riskdp/neutral_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace riskdp {

namespace {

constexpr double kActionTieTol = 1e-12;

// One greedy sweep: out[x] = min_a c(x,a) + discount * sum_j Q(j|x,a) in[j].
void greedy_sweep(const FiniteMdp& mdp, const std::vector<double>& in, double discount,
                  std::vector<double>& out, std::vector<int>& argmin) {
    for (int x = 0; x < mdp.state_count(); ++x) {
        double best = std::numeric_limits<double>::infinity();
        int best_a = -1;
        for (int a : mdp.admissible(x)) {
            const TransitionRow& row = mdp.transitions(x, a);
            double v = mdp.cost(x, a);
            for (std::size_t j = 0; j < row.size(); ++j) {
                v += discount * row.probabilities[j] * in[row.next_states[j]];
            }
            if (v < best - kActionTieTol) {
                best = v;
                best_a = a;
            }
        }
        if (best_a < 0) {
            std::ostringstream msg;
            msg << "dynamic programming: state " << x << " has no admissible action";
            throw std::invalid_argument(msg.str());
        }
        out[x] = best;
        argmin[x] = best_a;
    }
}

}  // namespace

BackwardInductionResult backward_induction(const FiniteMdp& mdp, int horizon) {
    if (horizon < 0) {
        throw std::invalid_argument("backward_induction: negative horizon");
    }
    BackwardInductionResult result;
    result.values.assign(horizon + 1, std::vector<double>(mdp.state_count(), 0.0));
    result.policy.decision.assign(horizon, std::vector<int>(mdp.state_count(), -1));
    for (int n = horizon - 1; n >= 0; --n) {
        greedy_sweep(mdp, result.values[n + 1], 1.0, result.values[n],
                     result.policy.decision[n]);
    }
    return result;
}

std::vector<int> states_missing_absorption(const FiniteMdp& mdp) {
    const int n = mdp.state_count();
    std::vector<char> target(n, 0);
    for (int x : zero_cost_absorbing_states(mdp)) {
        target[x] = 1;
    }
    // Largest region W such that some policy confined to W reaches the target
    // with positive probability from everywhere in W; almost-sure absorption
    // holds exactly on the final W.
    std::vector<char> winning(n, 1);
    while (true) {
        std::vector<char> reach = target;
        bool grew = true;
        while (grew) {
            grew = false;
            for (int x = 0; x < n; ++x) {
                if (reach[x] || !winning[x]) {
                    continue;
                }
                for (int a : mdp.admissible(x)) {
                    const TransitionRow& row = mdp.transitions(x, a);
                    if (row.empty()) {
                        continue;
                    }
                    bool stays = true;
                    bool touches = false;
                    for (int y : row.next_states) {
                        stays = stays && winning[y];
                        touches = touches || reach[y];
                    }
                    if (stays && touches) {
                        reach[x] = 1;
                        grew = true;
                        break;
                    }
                }
            }
        }
        if (reach == winning) {
            break;
        }
        winning = reach;
    }
    std::vector<int> missing;
    for (int x = 0; x < n; ++x) {
        if (!winning[x]) {
            missing.push_back(x);
        }
    }
    return missing;
}

ValueIterationResult value_iteration_infinite(const FiniteMdp& mdp, double tolerance,
                                              int max_iterations, double discount) {
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("value_iteration_infinite: tolerance must be positive");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("value_iteration_infinite: max_iterations must be positive");
    }
    if (!(discount > 0.0) || discount > 1.0) {
        throw std::invalid_argument("value_iteration_infinite: discount must lie in (0, 1]");
    }
    if (discount == 1.0) {
        const std::vector<int> missing = states_missing_absorption(mdp);
        if (!missing.empty()) {
            std::ostringstream msg;
            msg << "value_iteration_infinite: no policy reaches a zero-cost absorbing state "
                   "almost surely from state(s)";
            for (int x : missing) {
                msg << ' ' << x;
            }
            msg << "; total cost may diverge";
            throw std::invalid_argument(msg.str());
        }
    }
    ValueIterationResult result;
    result.values.assign(mdp.state_count(), 0.0);
    result.policy.decision.assign(mdp.state_count(), -1);
    std::vector<double> next(mdp.state_count(), 0.0);
    double increment = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= max_iterations; ++it) {
        greedy_sweep(mdp, result.values, discount, next, result.policy.decision);
        increment = 0.0;
        for (int x = 0; x < mdp.state_count(); ++x) {
            increment = std::max(increment, std::abs(next[x] - result.values[x]));
        }
        result.values.swap(next);
        result.iterations = it;
        result.final_increment = increment;
        if (increment <= tolerance) {
            return result;
        }
    }
    std::ostringstream msg;
    msg << "value_iteration_infinite: increment " << increment << " still above tolerance "
        << tolerance << " after " << max_iterations << " iterations";
    throw ConvergenceError(msg.str(), increment);
}

}  // namespace riskdp
