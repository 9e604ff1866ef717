// Command-line front end: solve risk-averse control problems on finite MDP
// models, validate model files, evaluate tail risk of sample files, check the
// solver against the brute-force oracle, and run the linear-quadratic demo.
// All outputs are deterministic: rerunning a command with the same arguments
// reproduces every artifact byte for byte.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "riskdp/augmented_dp.hpp"
#include "riskdp/io_util.hpp"
#include "riskdp/lq.hpp"
#include "riskdp/model_io.hpp"
#include "riskdp/neutral_dp.hpp"
#include "riskdp/oracle.hpp"
#include "riskdp/random.hpp"
#include "riskdp/risk.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::ofstream open_artifact(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + (dir / name).string() + " for writing");
    }
    return out;
}

void write_json(const fs::path& dir, const std::string& name, const ordered_json& doc) {
    std::ofstream out = open_artifact(dir, name);
    out << doc.dump(2) << '\n';
}

struct SolveArgs {
    std::string model_path;
    int x0 = 0;
    double alpha = 0.5;
    std::optional<int> horizon;
    bool infinite = false;
    double s_step = 1.0;
    double margin = 2.0;
    std::optional<double> s_max;
    double tolerance = 1e-9;
    int max_iterations = 100000;
    std::string out_dir;
    bool check_oracle = false;
};

constexpr double kOracleValueTol = 1e-9;

ordered_json oracle_comparison(const riskdp::FiniteMdp& mdp, const SolveArgs& args,
                               const riskdp::AvarSolution& sol, bool& pass) {
    std::vector<double> candidates;
    candidates.reserve(sol.grid.size());
    for (long i = 0; i < sol.grid.size(); ++i) {
        candidates.push_back(sol.grid.value(i));
    }
    const riskdp::OracleAvarResult oracle = riskdp::oracle_min_avar(
        mdp, args.x0, *args.horizon, riskdp::RiskLevel(args.alpha), candidates);
    const double gap = std::abs(sol.avar - oracle.avar);
    const double s_gap = std::abs(sol.s_star - oracle.s_star);
    pass = gap <= kOracleValueTol && s_gap <= sol.grid.step() + 1e-12;
    ordered_json doc;
    doc["oracle_avar"] = oracle.avar;
    doc["oracle_s_star"] = oracle.s_star;
    doc["value_gap"] = gap;
    doc["s_star_gap"] = s_gap;
    doc["pass"] = pass;
    return doc;
}

int run_solve(const SolveArgs& args) {
    const riskdp::FiniteMdp mdp = riskdp::load_model_file(args.model_path);
    const riskdp::RiskLevel level(args.alpha);
    riskdp::AvarSolveConfig config;
    config.s_step = args.s_step;
    config.margin = args.margin;
    config.tolerance = args.tolerance;
    config.max_iterations = args.max_iterations;
    config.s_max_override = args.s_max;

    riskdp::AvarSolution sol;
    if (args.infinite) {
        sol = riskdp::solve_avar_infinite(mdp, args.x0, level, config);
    } else {
        sol = riskdp::solve_avar(mdp, args.x0, *args.horizon, level, config);
    }

    ordered_json summary;
    summary["command"] = "solve";
    summary["model"] = args.model_path;
    summary["x0"] = args.x0;
    summary["alpha"] = args.alpha;
    if (args.infinite) {
        summary["horizon"] = "infinite";
        summary["tolerance"] = args.tolerance;
        summary["max_iterations"] = args.max_iterations;
        summary["iterations"] = sol.iterations;
        summary["final_increment"] = sol.final_increment;
    } else {
        summary["horizon"] = *args.horizon;
    }
    summary["s_step"] = args.s_step;
    summary["margin"] = args.margin;
    summary["s_min"] = sol.grid.min_value();
    summary["s_max"] = sol.grid.max_value();
    summary["grid_points"] = sol.grid.size();
    summary["avar"] = sol.avar;
    summary["s_star"] = sol.s_star;

    bool oracle_pass = true;
    if (args.check_oracle) {
        summary["oracle"] = oracle_comparison(mdp, args, sol, oracle_pass);
    }

    if (!args.out_dir.empty()) {
        const fs::path dir(args.out_dir);
        std::ofstream table = open_artifact(dir, "table.csv");
        riskdp::write_table_csv(table, sol);
        std::ofstream policy = open_artifact(dir, "policy.csv");
        riskdp::write_policy_csv(policy, sol);
        write_json(dir, "summary.json", summary);
    }
    std::cout << summary.dump(2) << '\n';
    return oracle_pass ? 0 : 1;
}

int run_validate(const std::string& model_path) {
    const riskdp::FiniteMdp mdp = riskdp::load_model_file(model_path);
    std::cout << "ok: " << mdp.state_count() << " states, " << mdp.action_count()
              << " actions";
    if (!mdp.absorbing().empty()) {
        std::cout << ", absorbing";
        for (int x : mdp.absorbing()) {
            std::cout << ' ' << x;
        }
    }
    std::cout << '\n';
    return 0;
}

int run_risk(const std::string& samples_path, double alpha, const std::string& out_dir) {
    std::ifstream in(samples_path);
    if (!in) {
        throw std::runtime_error(samples_path + ": cannot open for reading");
    }
    std::vector<double> samples;
    double v = 0.0;
    while (in >> v) {
        samples.push_back(v);
    }
    if (!in.eof()) {
        throw std::runtime_error(samples_path + ": expected one number per line");
    }
    if (samples.empty()) {
        throw std::runtime_error(samples_path + ": no samples");
    }
    const riskdp::RiskLevel level(alpha);
    const riskdp::CostDistribution dist = riskdp::to_empirical(samples);
    const riskdp::AvarMinimization mini = riskdp::avar_via_minimization(dist, level);

    ordered_json doc;
    doc["command"] = "risk";
    doc["samples"] = samples.size();
    doc["alpha"] = alpha;
    doc["mean"] = dist.mean();
    doc["value_at_risk"] = riskdp::value_at_risk(dist, level);
    doc["avar"] = riskdp::average_value_at_risk(dist, level);
    doc["minimizer_s"] = mini.s_star;
    doc["minimizer_value"] = mini.value;
    if (!out_dir.empty()) {
        write_json(fs::path(out_dir), "risk.json", doc);
    }
    std::cout << doc.dump(2) << '\n';
    return 0;
}

int run_oracle_check(const SolveArgs& args) {
    const riskdp::FiniteMdp mdp = riskdp::load_model_file(args.model_path);
    riskdp::AvarSolveConfig config;
    config.s_step = args.s_step;
    config.margin = args.margin;
    const riskdp::AvarSolution sol =
        riskdp::solve_avar(mdp, args.x0, *args.horizon, riskdp::RiskLevel(args.alpha), config);

    bool pass = true;
    ordered_json oracle = oracle_comparison(mdp, args, sol, pass);
    ordered_json doc;
    doc["command"] = "oracle-check";
    doc["model"] = args.model_path;
    doc["x0"] = args.x0;
    doc["alpha"] = args.alpha;
    doc["horizon"] = *args.horizon;
    doc["s_step"] = args.s_step;
    doc["margin"] = args.margin;
    doc["solver_avar"] = sol.avar;
    doc["solver_s_star"] = sol.s_star;
    for (auto& [key, value] : oracle.items()) {
        doc[key] = value;
    }
    if (!args.out_dir.empty()) {
        write_json(fs::path(args.out_dir), "oracle_check.json", doc);
    }
    std::cout << doc.dump(2) << '\n';
    return pass ? 0 : 1;
}

struct LqArgs {
    int horizon = 5;
    double alpha = 0.9;
    int samples = 10000;
    std::uint64_t seed = 0;
    double noise_std = 1.0;
    double x0 = 0.0;
    std::string out_dir;
    bool per_trajectory = false;
};

void write_lq_row(std::ostream& out, const char* name, const LqArgs& args,
                  const riskdp::LqMcSummary& s) {
    out << name << ',' << riskdp::format_double(args.alpha) << ',' << args.horizon << ','
        << args.samples << ',' << args.seed << ',' << riskdp::format_double(s.mean) << ','
        << riskdp::format_double(s.value_at_risk) << ',' << riskdp::format_double(s.avar) << ','
        << riskdp::format_double(s.avar_se) << '\n';
}

int run_lq_demo(const LqArgs& args) {
    riskdp::LqParams params;
    params.horizon = args.horizon;
    params.alpha = riskdp::RiskLevel(args.alpha);
    params.noise_std = args.noise_std;
    params.x0 = args.x0;
    params.sample_count = args.samples;
    params.seed = args.seed;
    riskdp::validate_params(params);

    const double global_s = riskdp::estimate_global_s(params);
    const riskdp::RiccatiTable riccati = riskdp::riccati_recursion(args.horizon);

    riskdp::LqZeroPolicy zero;
    riskdp::LqNeutralPolicy neutral = riskdp::lq_neutral_policy(riccati);
    riskdp::LqHeuristicPolicy heuristic(riccati, global_s);

    const riskdp::LqMcSummary zero_summary = riskdp::mc_evaluate_policy_avar(zero, params);
    const riskdp::LqMcSummary neutral_summary = riskdp::mc_evaluate_policy_avar(neutral, params);
    const riskdp::LqMcSummary heuristic_summary =
        riskdp::mc_evaluate_policy_avar(heuristic, params);

    std::ostringstream csv;
    csv << "policy,alpha,N,M,seed,mean,value_at_risk,avar,avar_stderr\n";
    write_lq_row(csv, "zero", args, zero_summary);
    write_lq_row(csv, "neutral", args, neutral_summary);
    write_lq_row(csv, "heuristic", args, heuristic_summary);

    std::cout << "global_s " << riskdp::format_double(global_s) << '\n' << csv.str();
    if (!args.out_dir.empty()) {
        const fs::path dir(args.out_dir);
        std::ofstream out = open_artifact(dir, "lq_summary.csv");
        out << csv.str();
        ordered_json meta;
        meta["command"] = "lq-demo";
        meta["horizon"] = args.horizon;
        meta["alpha"] = args.alpha;
        meta["samples"] = args.samples;
        meta["seed"] = args.seed;
        meta["noise_std"] = args.noise_std;
        meta["x0"] = args.x0;
        meta["global_s"] = global_s;
        meta["riccati_k0"] = riccati.coefficient[0];
        write_json(dir, "lq_meta.json", meta);
        if (args.per_trajectory) {
            std::ofstream traj = open_artifact(dir, "lq_trajectories.csv");
            traj << "policy,trajectory,total_cost,switch_stage\n";
            auto dump_policy = [&](const char* name, riskdp::LqPolicy& policy) {
                for (int i = 0; i < args.samples; ++i) {
                    const riskdp::LqTrajectory t = riskdp::simulate_lq(
                        params, policy,
                        riskdp::derive_seed(riskdp::derive_seed(args.seed, 0),
                                            static_cast<std::uint64_t>(i)));
                    traj << name << ',' << i << ',' << riskdp::format_double(t.total_cost)
                         << ',' << t.switch_stage << '\n';
                }
            };
            dump_policy("zero", zero);
            dump_policy("neutral", neutral);
            dump_policy("heuristic", heuristic);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk-averse total-cost control on finite MDP models"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand(
        "solve", "Minimize Average-Value-at-Risk of the total cost from a start state");
    solve->add_option("--model", solve_args.model_path, "model JSON file")->required();
    solve->add_option("--x0", solve_args.x0, "start state")->required();
    solve->add_option("--alpha", solve_args.alpha, "risk level in (0, 1)")->required();
    CLI::Option* horizon_opt =
        solve->add_option("--horizon", solve_args.horizon, "number of stages");
    CLI::Option* infinite_opt = solve->add_flag(
        "--infinite", solve_args.infinite,
        "solve the infinite-horizon problem (needs reachable zero-cost absorption)");
    horizon_opt->excludes(infinite_opt);
    infinite_opt->excludes(horizon_opt);
    solve->add_option("--s-step", solve_args.s_step, "budget grid step")
        ->check(CLI::PositiveNumber);
    solve->add_option("--margin", solve_args.margin, "budget grid margin beyond [0, max]")
        ->check(CLI::NonNegativeNumber);
    solve->add_option("--s-max", solve_args.s_max,
                      "budget grid upper end (infinite horizon only)")
        ->needs(infinite_opt);
    solve->add_option("--tolerance", solve_args.tolerance,
                      "fixed-point tolerance (infinite horizon only)")
        ->check(CLI::PositiveNumber);
    solve->add_option("--max-iterations", solve_args.max_iterations,
                      "iteration cap (infinite horizon only)")
        ->check(CLI::PositiveNumber);
    solve->add_option("--out", solve_args.out_dir, "directory for table/policy/summary files");
    solve->add_flag("--check-oracle", solve_args.check_oracle,
                    "compare against brute-force enumeration (finite horizon only)");

    std::string validate_model_path;
    CLI::App* validate = app.add_subcommand("validate", "Check a model JSON file");
    validate->add_option("--model", validate_model_path, "model JSON file")->required();

    std::string risk_samples;
    double risk_alpha = 0.5;
    std::string risk_out;
    CLI::App* risk =
        app.add_subcommand("risk", "Tail-risk summary of a file of sampled costs");
    risk->add_option("--samples", risk_samples, "text file, one cost per line")->required();
    risk->add_option("--alpha", risk_alpha, "risk level in (0, 1)")->required();
    risk->add_option("--out", risk_out, "directory for risk.json");

    SolveArgs oracle_args;
    CLI::App* oracle = app.add_subcommand(
        "oracle-check", "Compare the solver with exhaustive policy enumeration");
    oracle->add_option("--model", oracle_args.model_path, "model JSON file")->required();
    oracle->add_option("--x0", oracle_args.x0, "start state")->required();
    oracle->add_option("--alpha", oracle_args.alpha, "risk level in (0, 1)")->required();
    oracle->add_option("--horizon", oracle_args.horizon, "number of stages")->required();
    oracle->add_option("--s-step", oracle_args.s_step, "budget grid step")
        ->check(CLI::PositiveNumber);
    oracle->add_option("--margin", oracle_args.margin, "budget grid margin")
        ->check(CLI::NonNegativeNumber);
    oracle->add_option("--out", oracle_args.out_dir, "directory for oracle_check.json");

    LqArgs lq_args;
    CLI::App* lq = app.add_subcommand(
        "lq-demo", "Budget heuristic vs risk-neutral feedback on the scalar LQ system");
    lq->add_option("--horizon", lq_args.horizon, "number of stages")->required();
    lq->add_option("--alpha", lq_args.alpha, "risk level in (0, 1)")->required();
    lq->add_option("--samples", lq_args.samples, "Monte Carlo trajectories")->required();
    lq->add_option("--seed", lq_args.seed, "root seed")->required();
    lq->add_option("--noise-std", lq_args.noise_std, "noise standard deviation")
        ->check(CLI::PositiveNumber);
    lq->add_option("--x0", lq_args.x0, "start state");
    lq->add_option("--out", lq_args.out_dir, "directory for lq_summary.csv and lq_meta.json");
    lq->add_flag("--per-trajectory", lq_args.per_trajectory,
                 "also write per-trajectory totals and switch stages");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            if (!solve_args.infinite && !solve_args.horizon) {
                std::cerr << "error: pass --horizon N or --infinite\n";
                return 2;
            }
            if (solve_args.check_oracle && solve_args.infinite) {
                std::cerr << "error: --check-oracle needs a finite horizon\n";
                return 2;
            }
            return run_solve(solve_args);
        }
        if (validate->parsed()) {
            return run_validate(validate_model_path);
        }
        if (risk->parsed()) {
            return run_risk(risk_samples, risk_alpha, risk_out);
        }
        if (oracle->parsed()) {
            return run_oracle_check(oracle_args);
        }
        if (lq->parsed()) {
            return run_lq_demo(lq_args);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
