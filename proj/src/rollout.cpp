#include "riskdp/rollout.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

#include "riskdp/random.hpp"

namespace riskdp {

namespace {

RolloutTrace run(const FiniteMdp& mdp, const std::function<int(int, int)>& choose, int x0,
                 int horizon, std::uint64_t seed) {
    if (horizon < 0) {
        throw std::invalid_argument("rollout: negative horizon");
    }
    std::mt19937_64 gen(seed);
    RolloutTrace trace;
    trace.states.reserve(horizon + 1);
    trace.actions.reserve(horizon);
    trace.stage_costs.reserve(horizon);
    int x = x0;
    trace.states.push_back(x);
    for (int n = 0; n < horizon; ++n) {
        const int a = choose(n, x);
        if (!mdp.is_admissible(x, a)) {
            std::ostringstream msg;
            msg << "rollout: policy chose inadmissible action " << a << " at state " << x
                << ", stage " << n;
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
        x = row.next_states[sample_index(gen, row.probabilities)];
        trace.states.push_back(x);
    }
    return trace;
}

}  // namespace

RolloutTrace rollout(const FiniteMdp& mdp, const MarkovPolicy& policy, int x0, int horizon,
                     std::uint64_t seed) {
    if (policy.horizon() < horizon) {
        throw std::invalid_argument("rollout: policy horizon shorter than requested rollout");
    }
    return run(
        mdp, [&policy](int n, int x) { return policy.action(n, x); }, x0, horizon, seed);
}

RolloutTrace rollout(const FiniteMdp& mdp, const StationaryPolicy& policy, int x0, int horizon,
                     std::uint64_t seed) {
    return run(
        mdp, [&policy](int, int x) { return policy.action(x); }, x0, horizon, seed);
}

}  // namespace riskdp
