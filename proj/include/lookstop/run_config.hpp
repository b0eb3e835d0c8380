#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lookstop {

/// Everything a run needs, serializable to JSON so the manifest reproduces
/// byte-identical outputs. parse(emit(config)) == config.
struct RunConfig {
    int schema_version = 1;
    std::string command = "solve";  // solve | sweep | oracle | validate

    double horizon_T = 1.0;
    double eps = 0.5;
    std::vector<double> eps_grid;  // sweep rows; empty = derived from eps_count
    std::size_t eps_count = 21;    // uniform grid on [0, T] when eps_grid empty

    std::size_t n_steps = 500;
    std::size_t n_paths = 100000;
    std::size_t eval_paths = 0;  // 0 = n_paths
    std::uint64_t seed = 1;

    // problem; empty payoffs = single brownian_identity with lag eps, floor 0
    std::vector<std::pair<std::string, double>> payoffs;  // (builtin name, lag)
    double floor_eps = 0.0;

    // basis
    int basis_degree = 2;
    bool basis_cross_terms = true;
    bool basis_time_to_go = false;

    // floor handling: "raised" restricts stops to the provably-unstopped
    // segment (lag min time-to-go) of the single-lag problem; "literal"
    // keeps the problem floor.
    std::string floor_policy = "raised";

    // oracle
    std::size_t lag_steps = 0;
    std::size_t floor_steps = 0;
    double delta = 0.0;  // 0 = sqrt(T / n_steps)
    std::size_t oracle_cap = 24;
    std::vector<std::size_t> curve_lags;

    int threads = 0;  // 0 = hardware concurrency
    std::string out_dir;

    // validate scale + failure-injection fixture
    std::size_t validate_steps = 100;
    std::size_t validate_paths = 20000;
    bool inject_nan = false;

    bool operator==(const RunConfig&) const = default;
};

std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& text);

/// Checks every numeric field against the module preconditions it feeds;
/// throws InvalidArgumentError before any computation starts.
void validate_config(const RunConfig& config);

}  // namespace lookstop
