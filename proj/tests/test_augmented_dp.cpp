#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "instances.hpp"
#include "riskdp/augmented_dp.hpp"
#include "riskdp/neutral_dp.hpp"

using riskdp::AugmentedValueTable;
using riskdp::AvarSolution;
using riskdp::AvarSolveConfig;
using riskdp::backward_induction;
using riskdp::build_sgrid;
using riskdp::CostDistribution;
using riskdp::exact_cost_distribution;
using riskdp::FiniteAugmentedSolution;
using riskdp::FiniteMdp;
using riskdp::GridCapError;
using riskdp::OuterMinimum;
using riskdp::outer_minimize_avar;
using riskdp::RiskLevel;
using riskdp::rollout;
using riskdp::RolloutTrace;
using riskdp::SGrid;
using riskdp::solve_avar;
using riskdp::solve_avar_infinite;
using riskdp::solve_w_finite;
using riskdp::solve_w_infinite;
using riskdp::terminal_table;

TEST_CASE("budget grids snap outward onto step multiples and keep zero") {
    const SGrid grid(-1.0, 3.5, 1.0);
    CHECK(grid.min_value() == -1.0);
    CHECK(grid.max_value() == 4.0);
    CHECK(grid.size() == 6);
    CHECK(grid.value(grid.zero_index()) == 0.0);

    const SGrid half(-0.75, 2.0, 0.5);
    CHECK(half.min_value() == -1.0);
    CHECK(half.max_value() == 2.0);
    CHECK(half.size() == 7);

    CHECK_THROWS_AS(SGrid(0.5, 3.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SGrid(-1.0, -0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SGrid(-1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("nearest grid index clamps and rounds") {
    const SGrid grid(-2.0, 3.0, 1.0);
    CHECK(grid.nearest_index(0.0) == grid.zero_index());
    CHECK(grid.value(grid.nearest_index(0.4)) == 0.0);
    CHECK(grid.value(grid.nearest_index(0.6)) == 1.0);
    CHECK(grid.nearest_index(-50.0) == 0);
    CHECK(grid.nearest_index(50.0) == grid.size() - 1);
}

TEST_CASE("build_sgrid covers the reachable cost range") {
    const SGrid grid = build_sgrid(riskdp::test::make_gamble(), 3, 1.0, 2.0);
    CHECK(grid.min_value() == -2.0);
    CHECK(grid.max_value() == 11.0);  // 3 stages x max cost 3 + margin
    CHECK(grid.size() == 14);
}

TEST_CASE("absurdly fine grids are refused with a memory estimate") {
    try {
        build_sgrid(riskdp::test::make_chain2x2(), 100, 1e-6, 1.0);
        FAIL("expected GridCapError");
    } catch (const GridCapError& e) {
        const std::string what = e.what();
        CHECK(what.find("cap") != std::string::npos);
        CHECK(what.find("GiB") != std::string::npos);
    }
}

TEST_CASE("terminal condition is the positive part of the deficit") {
    const FiniteMdp mdp = riskdp::test::make_gamble();
    const SGrid grid(-2.0, 3.0, 1.0);
    const AugmentedValueTable t = terminal_table(mdp, grid);
    for (int x = 0; x < 3; ++x) {
        CHECK(t.at(x, grid.nearest_index(-2.0)) == 2.0);
        CHECK(t.at(x, grid.nearest_index(0.0)) == 0.0);
        CHECK(t.at(x, grid.nearest_index(3.0)) == 0.0);
    }
    CHECK(t.stage() == 0);
}

TEST_CASE("table evaluation: grid hits, interpolation, exact left tail") {
    const FiniteMdp mdp = riskdp::test::make_gamble();
    const SGrid grid = build_sgrid(mdp, 3, 1.0, 2.0);
    const FiniteAugmentedSolution sol = solve_w_finite(mdp, 3, grid);
    const AugmentedValueTable& w = sol.tables.back();

    // Grid hits return stored values untouched.
    CHECK(w.eval(0, 0.0) == w.at(0, grid.nearest_index(0.0)));
    // Interpolation lies between the neighbors.
    const double mid = w.eval(0, 0.5);
    const double lo = w.at(0, grid.nearest_index(0.0));
    const double hi = w.at(0, grid.nearest_index(1.0));
    CHECK(mid <= std::max(lo, hi) + 1e-15);
    CHECK(mid >= std::min(lo, hi) - 1e-15);
    CHECK(mid == 0.5 * lo + 0.5 * hi);
    // Left of the grid the continuation has slope exactly -1.
    CHECK(w.eval(0, grid.min_value() - 5.0) == w.at(0, 0) + 5.0);
    // Right of the grid the table is flat (and zero once s covers all cost).
    CHECK(w.eval(0, grid.max_value() + 9.0) == w.at(0, grid.size() - 1));
    CHECK(w.at(0, grid.size() - 1) == 0.0);
}

TEST_CASE("three-stage shortfall table of the gamble, solved by hand") {
    const FiniteMdp mdp = riskdp::test::make_gamble();
    const SGrid grid = build_sgrid(mdp, 3, 1.0, 2.0);
    const FiniteAugmentedSolution sol = solve_w_finite(mdp, 3, grid);
    const AugmentedValueTable& w = sol.tables.back();
    // min over safe (2 - s)^+ and gamble 3/4 (0 - s)^+ + 1/4 (3 - s)^+,
    // dyadic arithmetic, so the equalities are exact.
    CHECK(w.eval(0, -2.0) == 2.75);
    CHECK(w.eval(0, -1.0) == 1.75);
    CHECK(w.eval(0, 0.0) == 0.75);
    CHECK(w.eval(0, 1.0) == 0.5);
    CHECK(w.eval(0, 2.0) == 0.0);
    CHECK(w.eval(0, 3.0) == 0.0);
    // State 1 pays 3 and stops.
    CHECK(w.eval(1, 0.0) == 3.0);
    CHECK(w.eval(1, 3.0) == 0.0);

    // Values never go negative and never increase in s.
    for (int x = 0; x < 3; ++x) {
        for (long i = 0; i + 1 < grid.size(); ++i) {
            CHECK(w.at(x, i) >= 0.0);
            CHECK(w.at(x, i) >= w.at(x, i + 1));
            // 1-Lipschitz in s.
            CHECK(w.at(x, i) - w.at(x, i + 1) <= grid.step() + 1e-12);
        }
    }
    // More stages cannot reduce the shortfall: tables grow with the horizon.
    for (std::size_t k = 0; k + 1 < sol.tables.size(); ++k) {
        for (int x = 0; x < 3; ++x) {
            for (long i = 0; i < grid.size(); ++i) {
                CHECK(sol.tables[k].at(x, i) <= sol.tables[k + 1].at(x, i) + 1e-12);
            }
        }
    }
}

TEST_CASE("greedy decisions depend on the remaining budget") {
    const FiniteMdp mdp = riskdp::test::make_gamble();
    const AvarSolution sol = solve_avar(mdp, 0, 3, RiskLevel(0.7));
    // Flush with the safe cost the safe action is perfect; deep in deficit
    // the gamble's 3/4 chance of zero cost wins.
    CHECK(sol.policy.action(0, 0, 2.0) == 0);
    CHECK(sol.policy.action(0, 0, 0.0) == 1);
}

TEST_CASE("gamble optimum flips from gamble to safe as alpha grows") {
    const FiniteMdp mdp = riskdp::test::make_gamble();

    const AvarSolution low = solve_avar(mdp, 0, 3, RiskLevel(0.3));
    CHECK(std::abs(low.avar - 15.0 / 14.0) <= 1e-12);
    CHECK(low.s_star == 0.0);

    const AvarSolution mid = solve_avar(mdp, 0, 3, RiskLevel(0.7));
    CHECK(mid.avar == 2.0);
    CHECK(mid.s_star == 2.0);

    const AvarSolution high = solve_avar(mdp, 0, 3, RiskLevel(0.9));
    CHECK(high.avar == 2.0);
    CHECK(high.s_star == 2.0);
}

TEST_CASE("deterministic chain: budget equal to the certain cost is optimal") {
    const AvarSolution sol =
        solve_avar(riskdp::test::make_deterministic_chain(), 0, 3, RiskLevel(0.5));
    CHECK(sol.avar == 2.0);
    CHECK(sol.s_star == 2.0);
}

TEST_CASE("with the budget below zero the problem is risk neutral") {
    for (const FiniteMdp& mdp :
         {riskdp::test::make_gamble(), riskdp::test::make_chain2x2(),
          riskdp::test::make_insurance()}) {
        const int horizon = 3;
        const SGrid grid = build_sgrid(mdp, horizon, 1.0, 2.0);
        const FiniteAugmentedSolution aug = solve_w_finite(mdp, horizon, grid);
        const auto neutral = backward_induction(mdp, horizon);
        const AugmentedValueTable& w = aug.tables.back();
        for (int x = 0; x < mdp.state_count(); ++x) {
            for (long i = 0; i < grid.size(); ++i) {
                const double s = grid.value(i);
                if (s > 0.0) {
                    continue;
                }
                CHECK(std::abs(w.at(x, i) - (neutral.values[0][x] - s)) <= 1e-9);
                for (int n = 0; n < horizon; ++n) {
                    CHECK(aug.policy.action(n, x, s) == neutral.policy.action(n, x));
                }
            }
        }
    }
}

TEST_CASE("infinite-horizon shortfall on the geometric chain") {
    const FiniteMdp mdp = riskdp::test::make_geometric();
    const SGrid grid(-2.0, 6.0, 1.0);
    const auto sol = solve_w_infinite(mdp, grid);
    CHECK(std::abs(sol.table.at(0, grid.nearest_index(0.0)) - 2.0) <= 1e-6);
    CHECK(sol.final_increment <= 1e-9);
    CHECK(sol.iterations > 10);
    CHECK(sol.policy.stationary);

    const AvarSolution avar = solve_avar_infinite(mdp, 0, RiskLevel(0.5));
    CHECK(std::abs(avar.avar - 3.0) <= 1e-6);
    CHECK((avar.s_star == 1.0 || avar.s_star == 2.0));
    // Default grid upper end covers the value bound u(x0)/(1 - alpha).
    CHECK(avar.grid.max_value() >= 4.0);
    CHECK(avar.horizon == -1);
}

TEST_CASE("infinite-horizon solves require reachable absorption") {
    const SGrid grid(-1.0, 4.0, 1.0);
    CHECK_THROWS_AS(solve_w_infinite(riskdp::test::make_two_action_loop(), grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_avar_infinite(riskdp::test::make_chain2x2(), 0, RiskLevel(0.5)),
                    std::invalid_argument);
}

TEST_CASE("augmented rollout threads the budget through stage costs") {
    const FiniteMdp mdp = riskdp::test::make_gamble();
    const AvarSolution sol = solve_avar(mdp, 0, 3, RiskLevel(0.7));
    const RolloutTrace flush = rollout(mdp, sol.policy, 0, 3, 2.0, 11);
    CHECK(flush.actions[0] == 0);  // safe with the full budget
    CHECK(flush.total_cost == 2.0);
    const RolloutTrace broke = rollout(mdp, sol.policy, 0, 3, 0.0, 11);
    CHECK(broke.actions[0] == 1);  // gamble once the budget is gone

    const CostDistribution dist = exact_cost_distribution(mdp, sol.policy, 0, 3, 2.0);
    REQUIRE(dist.size() == 1);
    CHECK(dist.atoms()[0].value == 2.0);

    const AvarSolution low = solve_avar(mdp, 0, 3, RiskLevel(0.3));
    const CostDistribution gd = exact_cost_distribution(mdp, low.policy, 0, 3, low.s_star);
    REQUIRE(gd.size() == 2);
    CHECK(gd.atoms()[0].value == 0.0);
    CHECK(gd.atoms()[0].probability == 0.75);
    CHECK(gd.atoms()[1].value == 3.0);
}

TEST_CASE("csv export lists every stage, state and budget") {
    const AvarSolution sol = solve_avar(riskdp::test::make_gamble(), 0, 2, RiskLevel(0.5));
    std::ostringstream table;
    riskdp::write_table_csv(table, sol);
    std::ostringstream policy;
    riskdp::write_policy_csv(policy, sol);
    const std::string t = table.str();
    CHECK(t.find("stage,state,s,value,greedy_action\n") == 0);
    std::size_t rows = 0;
    for (char c : t) {
        rows += c == '\n';
    }
    CHECK(rows == 1 + 2 * 3 * static_cast<std::size_t>(sol.grid.size()));
    CHECK(policy.str().find("stage,state,s,action\n") == 0);
}
