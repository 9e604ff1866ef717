#include "riskdp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace riskdp {

namespace {
constexpr double kRowSumTol = 1e-9;
}

FiniteMdp::FiniteMdp(int state_count, int action_count)
    : state_count_(state_count), action_count_(action_count) {
    if (state_count < 1 || action_count < 1) {
        throw std::invalid_argument("FiniteMdp: state and action counts must be positive");
    }
    admissible_.resize(state_count);
    kernel_.resize(static_cast<std::size_t>(state_count) * action_count);
    cost_.assign(static_cast<std::size_t>(state_count) * action_count, 0.0);
}

void FiniteMdp::check_state(int state) const {
    if (state < 0 || state >= state_count_) {
        std::ostringstream msg;
        msg << "FiniteMdp: state " << state << " out of range [0, " << state_count_ << ")";
        throw std::out_of_range(msg.str());
    }
}

void FiniteMdp::check_action(int action) const {
    if (action < 0 || action >= action_count_) {
        std::ostringstream msg;
        msg << "FiniteMdp: action " << action << " out of range [0, " << action_count_ << ")";
        throw std::out_of_range(msg.str());
    }
}

void FiniteMdp::set_admissible(int state, std::vector<int> actions) {
    check_state(state);
    for (int a : actions) {
        check_action(a);
    }
    std::sort(actions.begin(), actions.end());
    actions.erase(std::unique(actions.begin(), actions.end()), actions.end());
    admissible_[state] = std::move(actions);
}

void FiniteMdp::add_transition(int state, int action, int next_state, double probability) {
    check_state(state);
    check_action(action);
    check_state(next_state);
    if (!(probability > 0.0) || !std::isfinite(probability)) {
        throw std::invalid_argument("FiniteMdp: transition probability must be positive");
    }
    TransitionRow& row = kernel_[static_cast<std::size_t>(state) * action_count_ + action];
    auto it = std::lower_bound(row.next_states.begin(), row.next_states.end(), next_state);
    if (it != row.next_states.end() && *it == next_state) {
        row.probabilities[it - row.next_states.begin()] += probability;
        return;
    }
    const auto pos = it - row.next_states.begin();
    row.next_states.insert(it, next_state);
    row.probabilities.insert(row.probabilities.begin() + pos, probability);
}

void FiniteMdp::set_cost(int state, int action, double cost) {
    check_state(state);
    check_action(action);
    cost_[static_cast<std::size_t>(state) * action_count_ + action] = cost;
}

void FiniteMdp::set_absorbing(std::vector<int> states) {
    for (int x : states) {
        check_state(x);
    }
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    absorbing_ = std::move(states);
}

const std::vector<int>& FiniteMdp::admissible(int state) const {
    check_state(state);
    return admissible_[state];
}

bool FiniteMdp::is_admissible(int state, int action) const {
    check_state(state);
    if (action < 0 || action >= action_count_) {
        return false;
    }
    const auto& acts = admissible_[state];
    return std::binary_search(acts.begin(), acts.end(), action);
}

const TransitionRow& FiniteMdp::transitions(int state, int action) const {
    check_state(state);
    check_action(action);
    return kernel_[static_cast<std::size_t>(state) * action_count_ + action];
}

double FiniteMdp::cost(int state, int action) const {
    check_state(state);
    check_action(action);
    return cost_[static_cast<std::size_t>(state) * action_count_ + action];
}

double FiniteMdp::max_cost() const {
    double m = 0.0;
    for (int x = 0; x < state_count_; ++x) {
        for (int a : admissible_[x]) {
            m = std::max(m, cost(x, a));
        }
    }
    return m;
}

MarkovPolicy repeat_policy(const StationaryPolicy& policy, int horizon) {
    if (horizon < 0) {
        throw std::invalid_argument("repeat_policy: negative horizon");
    }
    MarkovPolicy out;
    out.decision.assign(horizon, policy.decision);
    return out;
}

namespace {

bool row_is_unit_self_loop(const TransitionRow& row, int state) {
    return row.size() == 1 && row.next_states[0] == state &&
           std::abs(row.probabilities[0] - 1.0) <= kRowSumTol;
}

}  // namespace

std::vector<std::string> validate_model(const FiniteMdp& mdp) {
    std::vector<std::string> violations;
    auto report = [&violations](const std::string& line) { violations.push_back(line); };

    for (int x = 0; x < mdp.state_count(); ++x) {
        if (mdp.admissible(x).empty()) {
            std::ostringstream msg;
            msg << "state " << x << " has no admissible action";
            report(msg.str());
        }
        for (int a : mdp.admissible(x)) {
            const TransitionRow& row = mdp.transitions(x, a);
            if (row.empty()) {
                std::ostringstream msg;
                msg << "kernel row (x=" << x << ", a=" << a << ") has no successors";
                report(msg.str());
                continue;
            }
            double sum = 0.0;
            for (double p : row.probabilities) {
                sum += p;
            }
            if (std::abs(sum - 1.0) > kRowSumTol) {
                std::ostringstream msg;
                msg << "kernel row (x=" << x << ", a=" << a << ") sums to " << sum
                    << ", expected 1 within " << kRowSumTol;
                report(msg.str());
            }
            const double c = mdp.cost(x, a);
            if (!(c >= 0.0) || !std::isfinite(c)) {
                std::ostringstream msg;
                msg << "cost(x=" << x << ", a=" << a << ") = " << c << " is not nonnegative";
                report(msg.str());
            }
        }
    }
    for (int x : mdp.absorbing()) {
        bool ok = false;
        for (int a : mdp.admissible(x)) {
            if (mdp.cost(x, a) == 0.0 && row_is_unit_self_loop(mdp.transitions(x, a), x)) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            std::ostringstream msg;
            msg << "absorbing state " << x
                << " lacks an admissible zero-cost self-loop action";
            report(msg.str());
        }
    }
    return violations;
}

std::vector<int> zero_cost_absorbing_states(const FiniteMdp& mdp) {
    std::vector<int> out;
    for (int x = 0; x < mdp.state_count(); ++x) {
        for (int a : mdp.admissible(x)) {
            if (mdp.cost(x, a) == 0.0 && row_is_unit_self_loop(mdp.transitions(x, a), x)) {
                out.push_back(x);
                break;
            }
        }
    }
    return out;
}

}  // namespace riskdp
