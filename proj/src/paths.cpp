#include "lookstop/paths.hpp"

#include <cmath>
#include <cstdio>

#include "lookstop/errors.hpp"
#include "lookstop/parallel.hpp"
#include "lookstop/rng.hpp"

namespace lookstop {

TimeGrid make_grid(double horizon_T, std::size_t n_steps) {
    if (!(horizon_T > 0.0) || !std::isfinite(horizon_T))
        throw InvalidArgumentError("make_grid: horizon must be positive and finite");
    if (n_steps < 1)
        throw InvalidArgumentError("make_grid: need at least one step");
    TimeGrid g;
    g.horizon_T = horizon_T;
    g.n_steps = n_steps;
    g.dt = horizon_T / static_cast<double>(n_steps);
    g.times.resize(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k)
        g.times[k] = static_cast<double>(k) * g.dt;
    g.times[n_steps] = horizon_T;  // pin the endpoint exactly
    return g;
}

namespace {

PathBatch make_batch(const TimeGrid& grid, std::size_t first, std::size_t last,
                     std::uint64_t seed, PathKind kind, double step_size) {
    if (last <= first)
        throw InvalidArgumentError("simulate: need at least 1 path");
    const std::size_t n_paths = last - first;
    PathBatch b;
    b.grid = grid;
    b.n_paths = n_paths;
    b.kind = kind;
    b.step_size = step_size;
    b.seed = seed;
    b.values.assign((grid.n_steps + 1) * n_paths, 0.0);

    const double sqrt_dt = std::sqrt(grid.dt);
    const std::size_t n = grid.n_steps;
    parallel_blocks(n_paths, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            const std::uint64_t stream = first + p;  // global path index keys the counter
            double level = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                double inc;
                if (kind == PathKind::brownian)
                    inc = sqrt_dt * rng::standard_normal(seed, stream, k);
                else
                    inc = rng::fair_bit(seed, stream, k) ? step_size : -step_size;
                level += inc;
                b.values[(k + 1) * n_paths + p] = level;
            }
        }
    });
    return b;
}

}  // namespace

PathBatch simulate_brownian(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed) {
    return make_batch(grid, 0, n_paths, seed, PathKind::brownian, 0.0);
}

PathBatch simulate_walk(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed, double step_size) {
    if (!(step_size > 0.0) || !std::isfinite(step_size))
        throw InvalidArgumentError("simulate_walk: step size must be positive and finite");
    return make_batch(grid, 0, n_paths, seed, PathKind::walk, step_size);
}

PathBatch simulate_brownian_range(const TimeGrid& grid, std::size_t first, std::size_t last,
                                  std::uint64_t seed) {
    return make_batch(grid, first, last, seed, PathKind::brownian, 0.0);
}

PathBatch simulate_walk_range(const TimeGrid& grid, std::size_t first, std::size_t last,
                              std::uint64_t seed, double step_size) {
    if (!(step_size > 0.0) || !std::isfinite(step_size))
        throw InvalidArgumentError("simulate_walk: step size must be positive and finite");
    return make_batch(grid, first, last, seed, PathKind::walk, step_size);
}

WalkTree enumerate_walk(std::size_t n_steps, double step_size, std::size_t cap) {
    if (n_steps > cap)
        throw ResourceLimitError("enumerate_walk: " + std::to_string(n_steps) +
                                 " steps exceeds the cap of " + std::to_string(cap));
    if (!(step_size > 0.0) || !std::isfinite(step_size))
        throw InvalidArgumentError("enumerate_walk: step size must be positive and finite");
    WalkTree t;
    t.n_steps = n_steps;
    t.step_size = step_size;
    return t;
}

std::string paths_to_csv(const PathBatch& batch) {
    std::string out = "path,k,t,value\n";
    char line[96];
    for (std::size_t p = 0; p < batch.n_paths; ++p) {
        for (std::size_t k = 0; k <= batch.grid.n_steps; ++k) {
            std::snprintf(line, sizeof line, "%zu,%zu,%.12g,%.12g\n",
                          p, k, batch.grid.times[k], batch.value(p, k));
            out += line;
        }
    }
    return out;
}

}  // namespace lookstop
