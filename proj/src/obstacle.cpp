#include "lookstop/obstacle.hpp"

#include <cmath>
#include <cstdio>

#include "lookstop/errors.hpp"
#include "lookstop/parallel.hpp"

namespace lookstop {

PayoffFunctional brownian_identity() {
    return PayoffFunctional{
        "brownian_identity",
        [](std::size_t k, const PathPrefix& path) { return path[k]; },
    };
}

std::optional<PayoffFunctional> builtin_payoff(const std::string& name) {
    if (name == "brownian_identity") return brownian_identity();
    return std::nullopt;
}

ProblemSpec shiryaev_spec(double eps, double T) {
    if (!(T > 0.0))
        throw InvalidArgumentError("shiryaev_spec: horizon must be positive");
    if (!(eps >= 0.0) || eps > T)
        throw InvalidArgumentError("shiryaev_spec: lag must lie in [0, T]");
    ProblemSpec spec;
    spec.payoffs.emplace_back(brownian_identity(), eps);
    spec.floor_eps = 0.0;
    spec.horizon_T = T;
    return spec;
}

namespace {

std::size_t to_grid_steps(double value, double dt, const char* what) {
    const double ratio = value / dt;
    const double rounded = std::round(ratio);
    // relative tolerance 1e-9, absolute floor for values near zero
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio))) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "%s %.12g is not a multiple of dt = %.12g", what, value, dt);
        throw GridMismatchError(msg);
    }
    return static_cast<std::size_t>(rounded);
}

}  // namespace

BoundProblem bind(const ProblemSpec& spec, const TimeGrid& grid) {
    BoundProblem bound;
    bound.spec = spec;
    bound.grid = grid;
    for (const auto& [payoff, lag] : spec.payoffs) {
        if (lag < 0.0 || lag > spec.horizon_T)
            throw InvalidArgumentError("bind: lag " + std::to_string(lag) + " outside [0, T]");
        bound.lag_steps.push_back(to_grid_steps(lag, grid.dt, "lag"));
    }
    if (spec.floor_eps < 0.0 || spec.floor_eps > spec.horizon_T)
        throw InvalidArgumentError("bind: floor outside [0, T]");
    bound.floor_index = to_grid_steps(spec.floor_eps, grid.dt, "floor");
    if (std::abs(spec.horizon_T - grid.horizon_T) > 1e-9 * grid.horizon_T)
        throw GridMismatchError("bind: problem horizon does not match the grid horizon");
    return bound;
}

ObstacleValues build_obstacle(const BoundProblem& bound, const PathBatch& batch) {
    if (!batch.grid.same_as(bound.grid))
        throw InvalidArgumentError("build_obstacle: batch grid does not match the bound problem");
    const std::size_t n = batch.grid.n_steps;
    const std::size_t np = batch.n_paths;

    ObstacleValues obs;
    obs.grid = batch.grid;
    obs.n_paths = np;
    obs.xi.assign((n + 1) * np, 0.0);

    const std::size_t n_payoffs = bound.spec.payoffs.size();
    parallel_blocks(np, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            for (std::size_t k = 0; k <= n; ++k) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n_payoffs; ++i) {
                    const std::size_t j = lagged_index(k, bound.lag_steps[i]);
                    try {
                        acc += bound.spec.payoffs[i].first.eval(j, batch.prefix(p, j));
                    } catch (const std::exception& e) {
                        char msg[192];
                        std::snprintf(msg, sizeof msg,
                                      "payoff %zu (\"%s\") failed at k=%zu path=%zu: %s",
                                      i, bound.spec.payoffs[i].first.label.c_str(), k, p, e.what());
                        throw Error(msg);
                    }
                }
                obs.xi[k * np + p] = acc;
            }
        }
    });
    return obs;
}

IntegrabilityEstimate integrability_probe(const ObstacleValues& obstacle) {
    const std::size_t np = obstacle.n_paths;
    if (np < 2)
        throw InvalidArgumentError("integrability_probe: need at least 2 paths");
    const std::size_t n = obstacle.grid.n_steps;

    std::vector<double> sup_sq(np);
    parallel_blocks(np, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            double m = 0.0;
            for (std::size_t k = 0; k <= n; ++k)
                m = std::max(m, obstacle.xi[k * np + p]);
            sup_sq[p] = m * m;
        }
    });

    Moments mom = blocked_moments(np, [&](std::size_t p) { return sup_sq[p]; });

    IntegrabilityEstimate est;
    est.mean = mom.mean;
    est.stderr_ = mom.stderr_of_mean();
    est.n_paths = np;

    // Doubling-subsample stability probe. A finite second moment makes the
    // running mean settle (ratios near 1 by the LLN); a diverging one leaves
    // it dominated by single paths, so successive doublings keep moving it by
    // large factors in either direction. Two >25% moves past 1024 paths flag it.
    int unstable = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t size = 256; size <= np; size *= 2) {
        double s = 0.0;
        for (std::size_t p = 0; p < size; ++p) s += sup_sq[p];
        const double mean = s / static_cast<double>(size);
        if (have_prev && size >= 2048 && prev > 0.0 &&
            (mean > 1.25 * prev || mean < 0.75 * prev))
            ++unstable;
        prev = mean;
        have_prev = true;
    }
    est.growth_warning = unstable >= 2;
    return est;
}

}  // namespace lookstop
