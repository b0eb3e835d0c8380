#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "lookstop/analysis.hpp"
#include "lookstop/errors.hpp"
#include "lookstop/oracle.hpp"
#include "lookstop/parallel.hpp"
#include "lookstop/rng.hpp"
#include "lookstop/run_config.hpp"
#include "lookstop/summary.hpp"
#include "lookstop/validate.hpp"

namespace fs = std::filesystem;
using namespace lookstop;

namespace {

constexpr const char* kVersion = "0.1.0";

fs::path resolve_out_dir(const RunConfig& config) {
    if (!config.out_dir.empty()) return config.out_dir;
    if (const char* env = std::getenv("LOOKSTOP_OUT_DIR"); env && *env) return env;
    return ".";
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << content;
}

void write_manifest(const fs::path& dir, const RunConfig& config,
                    const std::vector<std::string>& outputs) {
    nlohmann::json j{
        {"schema_version", 1},
        {"tool", "lookstop"},
        {"version", kVersion},
        {"config", nlohmann::json::parse(config_to_json(config))},
        {"outputs", outputs},
    };
    write_file(dir / "manifest.json", j.dump(2) + "\n");
}

ProblemSpec problem_from_config(const RunConfig& config) {
    if (config.payoffs.empty()) return shiryaev_spec(config.eps, config.horizon_T);
    ProblemSpec spec;
    for (const auto& [name, lag] : config.payoffs) {
        auto payoff = builtin_payoff(name);
        if (!payoff) throw InvalidArgumentError("unknown payoff name: " + name);
        spec.payoffs.emplace_back(std::move(*payoff), lag);
    }
    spec.floor_eps = config.floor_eps;
    spec.horizon_T = config.horizon_T;
    return spec;
}

SolveOptions solve_options_from_config(const RunConfig& config, const BoundProblem& bound) {
    SolveOptions opts;
    opts.basis.degree = config.basis_degree;
    opts.basis.cross_terms = config.basis_cross_terms;
    opts.basis.use_time_to_go = config.basis_time_to_go;
    opts.keep_y = false;  // summary output only needs the profiles
    opts.keep_k = false;
    if (config.floor_policy == "raised" && bound.lag_steps.size() == 1) {
        const std::size_t m = bound.lag_steps[0];
        const std::size_t raised = std::min(m, bound.grid.n_steps - m);
        if (raised > bound.floor_index) opts.floor_override = raised;
    }
    return opts;
}

int cmd_solve(const RunConfig& config, const std::string& dump_paths) {
    const TimeGrid grid = make_grid(config.horizon_T, config.n_steps);
    const BoundProblem bound = bind(problem_from_config(config), grid);
    const SolveOptions opts = solve_options_from_config(config, bound);
    const std::size_t eval_paths = config.eval_paths ? config.eval_paths : config.n_paths;

    RunOutput run = run_problem(bound, config.n_paths, eval_paths, config.seed, opts);

    const fs::path dir = resolve_out_dir(config);
    fs::create_directories(dir);
    std::vector<std::string> outputs{"solve_summary.json"};
    write_file(dir / "solve_summary.json", summary_json(run.solution, run.policy, config.eps));
    if (!dump_paths.empty()) {
        write_file(dir / dump_paths, paths_to_csv(simulate_brownian(grid, config.n_paths, config.seed)));
        outputs.push_back(dump_paths);
    }
    write_manifest(dir, config, outputs);

    if (run.probe.growth_warning)
        std::cerr << "warning: obstacle second-moment probe keeps growing across subsamples\n";
    std::printf("value_policy   = %.6f +- %.6f (n = %zu)\n", run.policy.estimate.mean,
                run.policy.estimate.stderr_, run.policy.estimate.n_samples);
    std::printf("value_insample = %.6f +- %.6f\n", run.solution.value_insample.mean,
                run.solution.value_insample.stderr_);
    return 0;
}

int cmd_sweep(const RunConfig& config) {
    std::vector<double> eps_values = config.eps_grid;
    if (eps_values.empty()) {
        eps_values.reserve(config.eps_count);
        for (std::size_t i = 0; i < config.eps_count; ++i)
            eps_values.push_back(config.horizon_T * static_cast<double>(i) /
                                 static_cast<double>(config.eps_count - 1));
    }
    SweepConfig sc;
    sc.n_steps = config.n_steps;
    sc.n_paths = config.n_paths;
    sc.eval_paths = config.eval_paths ? config.eval_paths : config.n_paths;
    sc.seed = config.seed;
    sc.raise_floor = config.floor_policy == "raised";
    sc.solve_options.basis.degree = config.basis_degree;
    sc.solve_options.basis.cross_terms = config.basis_cross_terms;
    sc.solve_options.basis.use_time_to_go = config.basis_time_to_go;
    sc.solve_options.keep_y = false;
    sc.solve_options.keep_k = false;

    const SweepResult result = sweep(config.horizon_T, eps_values, sc);

    const fs::path dir = resolve_out_dir(config);
    fs::create_directories(dir);
    write_file(dir / "sweep.csv", sweep_csv(result));
    write_file(dir / "sweep.json", sweep_json(result));
    write_manifest(dir, config, {"sweep.csv", "sweep.json"});
    std::printf("%zu rows written; max adjacent jump %.4f\n", result.rows.size(),
                result.max_adjacent_jump);
    return 0;
}

int cmd_oracle(const RunConfig& config) {
    const fs::path dir = resolve_out_dir(config);
    fs::create_directories(dir);
    if (!config.curve_lags.empty()) {
        auto rows = oracle_value_curve(config.n_steps, config.horizon_T, config.curve_lags,
                                       config.oracle_cap);
        write_file(dir / "oracle_curve.csv", oracle_curve_csv(rows, config.n_steps));
        write_manifest(dir, config, {"oracle_curve.csv"});
        for (const auto& [eps, value] : rows)
            std::printf("eps = %-10.6g value = %.12f\n", eps, value);
        return 0;
    }
    const TimeGrid grid = make_grid(config.horizon_T, config.n_steps);
    const double delta =
        config.delta > 0.0 ? config.delta
                           : std::sqrt(config.horizon_T / static_cast<double>(config.n_steps));
    const WalkTree tree = enumerate_walk(config.n_steps, delta, config.oracle_cap);
    ProblemSpec spec = shiryaev_spec(static_cast<double>(config.lag_steps) * grid.dt, config.horizon_T);
    spec.floor_eps = static_cast<double>(config.floor_steps) * grid.dt;
    const OracleResult result = oracle_solve(tree, bind(spec, grid));

    nlohmann::json j{
        {"schema_version", 1},
        {"n_steps", config.n_steps},
        {"lag_steps", config.lag_steps},
        {"floor_steps", config.floor_steps},
        {"delta", delta},
        {"value", result.value_at_floor},
        {"value_profile", result.value_profile},
        {"node_count", result.node_count},
    };
    write_file(dir / "oracle.json", j.dump(2) + "\n");
    write_manifest(dir, config, {"oracle.json"});
    std::printf("value = %.12f (nodes: %llu)\n", result.value_at_floor,
                static_cast<unsigned long long>(result.node_count));
    return 0;
}

int cmd_validate(const RunConfig& config) {
    ValidateOptions opts;
    opts.n_steps = config.validate_steps;
    opts.n_paths = config.validate_paths;
    opts.seed = config.seed;
    opts.inject_nan = config.inject_nan;
    const auto results = run_validation(opts);
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("[%s] %-32s %s\n", r.pass ? " ok " : "FAIL", r.name.c_str(), r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    const fs::path dir = resolve_out_dir(config);
    fs::create_directories(dir);
    write_manifest(dir, config, {});
    if (!all_pass) {
        std::fprintf(stderr, "validation failed\n");
        return 3;
    }
    std::printf("all checks passed\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Look-ahead optimal stopping: regression RBSDE solver and exact walk oracle"};
    app.require_subcommand(1);

    RunConfig config;
    std::string config_file, dump_paths;
    std::string eps_list, curve_list;
    bool no_cross = false;

    std::vector<CLI::Option*> out_opts, thread_opts;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", config.seed, "base RNG seed");
        thread_opts.push_back(
            cmd->add_option("--threads", config.threads, "worker thread cap (0 = hardware)"));
        out_opts.push_back(cmd->add_option("--out", config.out_dir,
                                           "output directory (default $LOOKSTOP_OUT_DIR or .)"));
        cmd->add_option("--config", config_file,
                        "run config JSON (replaces the other flags; --out/--threads still apply)");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve one look-ahead problem");
    solve->add_option("--T", config.horizon_T, "horizon");
    solve->add_option("--eps", config.eps, "look-ahead lag");
    solve->add_option("--steps", config.n_steps, "grid steps");
    solve->add_option("--paths", config.n_paths, "fitting paths");
    solve->add_option("--eval-paths", config.eval_paths, "policy evaluation paths (0 = same)");
    solve->add_option("--degree", config.basis_degree, "basis polynomial degree");
    solve->add_flag("--no-cross", no_cross, "disable basis cross terms");
    solve->add_flag("--time-to-go", config.basis_time_to_go, "add time-to-go to the basis");
    solve->add_option("--floor-policy", config.floor_policy, "raised|literal stop floor handling");
    solve->add_option("--floor", config.floor_eps, "admissible-stop floor time");
    solve->add_option("--dump-paths", dump_paths, "also dump the fitting paths as CSV");
    add_common(solve);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "value across a grid of lags");
    sweep_cmd->add_option("--T", config.horizon_T, "horizon");
    sweep_cmd->add_option("--eps-count", config.eps_count, "uniform lag grid size on [0, T]");
    sweep_cmd->add_option("--eps-list", eps_list, "comma-separated lag values");
    sweep_cmd->add_option("--steps", config.n_steps, "grid steps");
    sweep_cmd->add_option("--paths", config.n_paths, "fitting paths per row");
    sweep_cmd->add_option("--eval-paths", config.eval_paths, "policy paths per row (0 = same)");
    sweep_cmd->add_option("--degree", config.basis_degree, "basis polynomial degree");
    sweep_cmd->add_option("--floor-policy", config.floor_policy, "raised|literal");
    add_common(sweep_cmd);

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "exact value on the walk tree");
    oracle_cmd->add_option("--T", config.horizon_T, "horizon");
    oracle_cmd->add_option("--steps", config.n_steps, "tree depth");
    oracle_cmd->add_option("--lag-steps", config.lag_steps, "lag in grid steps");
    oracle_cmd->add_option("--floor-steps", config.floor_steps, "stop floor in grid steps");
    oracle_cmd->add_option("--delta", config.delta, "walk step size (0 = sqrt(T/steps))");
    oracle_cmd->add_option("--cap", config.oracle_cap, "tree depth cap");
    oracle_cmd->add_option("--curve", curve_list, "comma-separated lag list; emits the value curve CSV");
    add_common(oracle_cmd);

    CLI::App* validate_cmd = app.add_subcommand("validate", "run the invariant suite");
    validate_cmd->add_option("--steps", config.validate_steps, "grid steps for the checks");
    validate_cmd->add_option("--paths", config.validate_paths, "paths for the checks");
    validate_cmd->add_flag("--inject-nan", config.inject_nan,
                           "fixture: corrupt an obstacle and expect a data error");
    add_common(validate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) config.command = "solve";
        if (sweep_cmd->parsed()) config.command = "sweep";
        if (oracle_cmd->parsed()) config.command = "oracle";
        if (validate_cmd->parsed()) config.command = "validate";
        config.basis_cross_terms = !no_cross;
        if (!eps_list.empty()) {
            config.eps_grid.clear();
            for (const auto& tok : CLI::detail::split(eps_list, ','))
                config.eps_grid.push_back(std::stod(tok));
        }
        if (!curve_list.empty()) {
            config.curve_lags.clear();
            for (const auto& tok : CLI::detail::split(curve_list, ','))
                config.curve_lags.push_back(std::stoull(tok));
        }
        if (!config_file.empty()) {
            std::ifstream in(config_file, std::ios::binary);
            if (!in) throw InvalidArgumentError("cannot read config file " + config_file);
            std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            const std::string cli_out = config.out_dir;
            const int cli_threads = config.threads;
            bool out_given = false, threads_given = false;
            for (auto* o : out_opts) out_given = out_given || o->count() > 0;
            for (auto* o : thread_opts) threads_given = threads_given || o->count() > 0;
            config = config_from_json(text);
            if (out_given) config.out_dir = cli_out;
            if (threads_given) config.threads = cli_threads;
        }
        validate_config(config);
        if (config.threads > 0) set_max_threads(config.threads);

        if (config.command == "solve") return cmd_solve(config, dump_paths);
        if (config.command == "sweep") return cmd_sweep(config);
        if (config.command == "oracle") return cmd_oracle(config);
        return cmd_validate(config);
    } catch (const InvalidArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const GridMismatchError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ResourceLimitError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime failure: %s\n", e.what());
        return 3;
    }
}
