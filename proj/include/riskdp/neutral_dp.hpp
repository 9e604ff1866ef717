#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "riskdp/mdp.hpp"

namespace riskdp {

struct BackwardInductionResult {
    /// values[n][x] is the optimal expected cost-to-go over stages n..N-1;
    /// values[N] is identically zero.
    std::vector<std::vector<double>> values;
    /// Greedy actions for stages 0..N-1; ties resolve to the lowest index.
    MarkovPolicy policy;
};

/// Finite-horizon expected-total-cost dynamic programming.
BackwardInductionResult backward_induction(const FiniteMdp& mdp, int horizon);

/// Thrown when an iterative scheme fails to meet its tolerance in the allowed
/// number of iterations; carries the last observed increment.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double last_increment)
        : std::runtime_error(what), last_increment_(last_increment) {}
    double last_increment() const { return last_increment_; }

  private:
    double last_increment_;
};

struct ValueIterationResult {
    std::vector<double> values;
    StationaryPolicy policy;
    int iterations = 0;
    double final_increment = 0.0;
};

/**
 * States from which no policy reaches the set of zero-cost absorbing states
 * almost surely (the fixpoint of removing states that cannot both stay inside
 * the candidate region and retain a positive-probability route to absorption).
 * Empty exactly when undiscounted total-cost value iteration is well posed.
 */
std::vector<int> states_missing_absorption(const FiniteMdp& mdp);

/**
 * Total-cost value iteration from the zero function. With discount = 1 the
 * model must pass states_missing_absorption (the call is rejected otherwise,
 * naming the offending states); the iterates then increase monotonically to
 * the optimal values. discount < 1 is an explicitly flagged approximation
 * that skips the reachability precondition. Throws ConvergenceError if the
 * sup-norm increment stays above `tolerance` for `max_iterations` sweeps.
 */
ValueIterationResult value_iteration_infinite(const FiniteMdp& mdp, double tolerance = 1e-9,
                                              int max_iterations = 100000, double discount = 1.0);

}  // namespace riskdp
