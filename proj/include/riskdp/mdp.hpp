#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace riskdp {

/// Sparse transition row: successor states (ascending) with probabilities.
struct TransitionRow {
    std::vector<int> next_states;
    std::vector<double> probabilities;

    bool empty() const { return next_states.empty(); }
    std::size_t size() const { return next_states.size(); }
};

/**
 * Finite Markov decision process with stage-invariant admissible action sets,
 * a sparse transition kernel and nonnegative stage costs.
 *
 * Built incrementally through the setters and then treated as frozen;
 * validate_model reports every invariant violation. Successors within a row
 * are kept sorted by state so that path enumeration and inverse-CDF sampling
 * visit them in a reproducible order.
 */
class FiniteMdp {
  public:
    FiniteMdp(int state_count, int action_count);

    int state_count() const { return state_count_; }
    int action_count() const { return action_count_; }

    void set_admissible(int state, std::vector<int> actions);
    void add_transition(int state, int action, int next_state, double probability);
    void set_cost(int state, int action, double cost);
    void set_absorbing(std::vector<int> states);

    const std::vector<int>& admissible(int state) const;
    bool is_admissible(int state, int action) const;
    const TransitionRow& transitions(int state, int action) const;
    double cost(int state, int action) const;
    const std::vector<int>& absorbing() const { return absorbing_; }

    /// Largest stage cost over admissible pairs; 0 if none are declared.
    double max_cost() const;

  private:
    void check_state(int state) const;
    void check_action(int action) const;

    int state_count_;
    int action_count_;
    std::vector<std::vector<int>> admissible_;
    std::vector<TransitionRow> kernel_;
    std::vector<double> cost_;
    std::vector<int> absorbing_;
};

/// Deterministic decision rule indexed by (stage, state).
struct MarkovPolicy {
    std::vector<std::vector<int>> decision;

    int horizon() const { return static_cast<int>(decision.size()); }
    int action(int stage, int state) const { return decision.at(stage).at(state); }
};

/// Deterministic decision rule indexed by state alone.
struct StationaryPolicy {
    std::vector<int> decision;

    int action(int state) const { return decision.at(state); }
};

/// Markov policy that plays the stationary rule at every one of `horizon` stages.
MarkovPolicy repeat_policy(const StationaryPolicy& policy, int horizon);

/**
 * Checks kernel stochasticity (row sums within 1e-9 of one), cost
 * nonnegativity, admissible-set sanity and the declared absorbing states
 * (each needs a zero-cost admissible action that self-loops with probability
 * one). Returns one human-readable line per violation; empty means valid.
 */
std::vector<std::string> validate_model(const FiniteMdp& mdp);

/// States with an admissible zero-cost action that self-loops with
/// probability one. Detected structurally, independent of the declared list.
std::vector<int> zero_cost_absorbing_states(const FiniteMdp& mdp);

}  // namespace riskdp
