#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "instances.hpp"
#include "riskdp/mdp.hpp"

using riskdp::FiniteMdp;
using riskdp::MarkovPolicy;
using riskdp::repeat_policy;
using riskdp::StationaryPolicy;
using riskdp::validate_model;
using riskdp::zero_cost_absorbing_states;

namespace {

bool any_contains(const std::vector<std::string>& lines, const std::string& needle) {
    for (const std::string& line : lines) {
        if (line.find(needle) != std::string::npos) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("bundled instances validate cleanly") {
    CHECK(validate_model(riskdp::test::make_gamble()).empty());
    CHECK(validate_model(riskdp::test::make_chain2x2()).empty());
    CHECK(validate_model(riskdp::test::make_insurance()).empty());
    CHECK(validate_model(riskdp::test::make_geometric()).empty());
    CHECK(validate_model(riskdp::test::make_deterministic_chain()).empty());
}

TEST_CASE("validator reports non-stochastic rows") {
    FiniteMdp mdp(2, 1);
    mdp.set_admissible(0, {0});
    mdp.set_admissible(1, {0});
    mdp.add_transition(0, 0, 1, 0.9);
    mdp.add_transition(1, 0, 1, 1.0);
    const auto violations = validate_model(mdp);
    REQUIRE(!violations.empty());
    CHECK(any_contains(violations, "sums to"));
}

TEST_CASE("validator reports missing actions, bad costs and fake absorbing states") {
    FiniteMdp mdp(2, 1);
    mdp.set_admissible(0, {0});
    // state 1 left without any admissible action
    mdp.add_transition(0, 0, 1, 1.0);
    mdp.set_cost(0, 0, -2.0);
    mdp.set_absorbing({0});
    const auto violations = validate_model(mdp);
    CHECK(any_contains(violations, "no admissible action"));
    CHECK(any_contains(violations, "not nonnegative"));
    CHECK(any_contains(violations, "absorbing state 0"));
}

TEST_CASE("row sums within 1e-9 pass") {
    FiniteMdp mdp(1, 1);
    mdp.set_admissible(0, {0});
    mdp.add_transition(0, 0, 0, 1.0 + 5e-10);
    CHECK(validate_model(mdp).empty());
}

TEST_CASE("duplicate successor entries accumulate") {
    FiniteMdp mdp(2, 1);
    mdp.set_admissible(0, {0});
    mdp.set_admissible(1, {0});
    mdp.add_transition(0, 0, 1, 0.25);
    mdp.add_transition(0, 0, 1, 0.75);
    mdp.add_transition(1, 0, 1, 1.0);
    REQUIRE(mdp.transitions(0, 0).size() == 1);
    CHECK(mdp.transitions(0, 0).probabilities[0] == 1.0);
}

TEST_CASE("successors stay sorted regardless of insertion order") {
    FiniteMdp mdp(3, 1);
    for (int x = 0; x < 3; ++x) {
        mdp.set_admissible(x, {0});
        mdp.add_transition(x, 0, x, 1.0);
    }
    FiniteMdp scrambled(3, 1);
    scrambled.set_admissible(0, {0});
    scrambled.add_transition(0, 0, 2, 0.5);
    scrambled.add_transition(0, 0, 0, 0.25);
    scrambled.add_transition(0, 0, 1, 0.25);
    const auto& row = scrambled.transitions(0, 0);
    REQUIRE(row.size() == 3);
    CHECK(row.next_states == std::vector<int>{0, 1, 2});
    CHECK(row.probabilities[0] == 0.25);
    CHECK(row.probabilities[2] == 0.5);
}

TEST_CASE("zero-cost absorbing detection is structural") {
    CHECK(zero_cost_absorbing_states(riskdp::test::make_gamble()) == std::vector<int>{2});
    CHECK(zero_cost_absorbing_states(riskdp::test::make_geometric()) == std::vector<int>{1});
    CHECK(zero_cost_absorbing_states(riskdp::test::make_chain2x2()).empty());
    CHECK(zero_cost_absorbing_states(riskdp::test::make_two_action_loop()).empty());
}

TEST_CASE("setters reject out-of-range indices") {
    FiniteMdp mdp(2, 2);
    CHECK_THROWS_AS(mdp.set_admissible(2, {0}), std::out_of_range);
    CHECK_THROWS_AS(mdp.set_admissible(0, {5}), std::out_of_range);
    CHECK_THROWS_AS(mdp.add_transition(0, 0, 9, 1.0), std::out_of_range);
    CHECK_THROWS_AS(mdp.add_transition(0, 0, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mdp.set_cost(0, 7, 1.0), std::out_of_range);
    CHECK_THROWS_AS(FiniteMdp(0, 1), std::invalid_argument);
}

TEST_CASE("max_cost scans admissible pairs only") {
    FiniteMdp mdp(1, 2);
    mdp.set_admissible(0, {0});
    mdp.add_transition(0, 0, 0, 1.0);
    mdp.set_cost(0, 0, 1.5);
    mdp.set_cost(0, 1, 99.0);  // inadmissible, must not count
    CHECK(mdp.max_cost() == 1.5);
}

TEST_CASE("repeat_policy tiles a stationary rule") {
    StationaryPolicy stat{{1, 0}};
    MarkovPolicy tiled = repeat_policy(stat, 3);
    REQUIRE(tiled.horizon() == 3);
    CHECK(tiled.action(0, 0) == 1);
    CHECK(tiled.action(2, 1) == 0);
}
