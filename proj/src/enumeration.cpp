#include "riskdp/enumeration.hpp"

#include <sstream>

namespace riskdp {

namespace {

struct PathWalker {
    const FiniteMdp& mdp;
    const MarkovPolicy& policy;
    int horizon;
    std::uint64_t path_cap;
    std::uint64_t leaves = 0;
    std::vector<CostAtom> atoms;

    void walk(int n, int x, double cost_so_far, double prob) {
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
        const int a = policy.action(n, x);
        if (!mdp.is_admissible(x, a)) {
            std::ostringstream msg;
            msg << "exact_cost_distribution: policy chose inadmissible action " << a
                << " at state " << x << ", stage " << n;
            throw std::invalid_argument(msg.str());
        }
        const TransitionRow& row = mdp.transitions(x, a);
        const double c = mdp.cost(x, a);
        for (std::size_t j = 0; j < row.size(); ++j) {
            walk(n + 1, row.next_states[j], cost_so_far + c, prob * row.probabilities[j]);
        }
    }
};

}  // namespace

CostDistribution exact_cost_distribution(const FiniteMdp& mdp, const MarkovPolicy& policy, int x0,
                                         int horizon, std::uint64_t path_cap) {
    if (horizon < 0) {
        throw std::invalid_argument("exact_cost_distribution: negative horizon");
    }
    if (policy.horizon() < horizon) {
        throw std::invalid_argument("exact_cost_distribution: policy horizon too short");
    }
    PathWalker walker{mdp, policy, horizon, path_cap, 0, {}};
    walker.walk(0, x0, 0.0, 1.0);
    return CostDistribution(std::move(walker.atoms));
}

}  // namespace riskdp
