#include "lookstop/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lookstop/errors.hpp"
#include "lookstop/rng.hpp"

namespace lookstop {

double expected_max(double s) {
    if (s < 0.0 || !std::isfinite(s))
        throw InvalidArgumentError("expected_max: s must be nonnegative and finite");
    return std::sqrt(2.0 * s / std::numbers::pi);
}

namespace {

void check_eps_T(double eps, double T) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw InvalidArgumentError("horizon must be positive and finite");
    if (eps < 0.0 || eps > T)
        throw InvalidArgumentError("eps must lie in [0, T]");
}

}  // namespace

std::optional<double> closed_form_value(double eps, double T) {
    check_eps_T(eps, T);
    if (eps >= T / 2.0) return expected_max(T - eps);
    return std::nullopt;
}

Bounds bounds(double eps, double T) {
    check_eps_T(eps, T);
    Bounds b;
    b.lower = expected_max(std::min(eps, T - eps));
    b.upper = expected_max(T);
    b.lower_is_strict = eps > 0.0 && eps < T / 2.0;
    return b;
}

SweepResult sweep(double T, const std::vector<double>& eps_values, const SweepConfig& config) {
    std::vector<double> eps_sorted = eps_values;
    std::sort(eps_sorted.begin(), eps_sorted.end());

    const TimeGrid grid = make_grid(T, config.n_steps);
    SweepResult result;
    result.rows.reserve(eps_sorted.size());
    for (std::size_t row = 0; row < eps_sorted.size(); ++row) {
        const double eps = eps_sorted[row];
        const BoundProblem bound = bind(shiryaev_spec(eps, T), grid);
        const std::uint64_t seed = rng::row_seed(config.seed, row);
        SolveOptions options = config.solve_options;
        if (config.raise_floor && !options.floor_override) {
            const std::size_t m = bound.lag_steps[0];
            const std::size_t raised = std::min(m, config.n_steps - m);
            if (raised > bound.floor_index) options.floor_override = raised;
        }
        RunOutput run = run_problem(bound, config.n_paths, config.eval_paths, seed, options);
        SweepRow r;
        r.eps = eps;
        r.value_policy = run.policy.estimate.mean;
        r.stderr_ = run.policy.estimate.stderr_;
        r.value_insample = run.solution.value_insample.mean;
        const Bounds b = bounds(eps, T);
        r.lower = b.lower;
        r.upper = b.upper;
        r.closed_form = closed_form_value(eps, T);
        result.rows.push_back(r);
    }
    for (std::size_t i = 1; i < result.rows.size(); ++i)
        result.max_adjacent_jump = std::max(
            result.max_adjacent_jump,
            std::abs(result.rows[i].value_policy - result.rows[i - 1].value_policy));
    return result;
}

std::vector<ConvergenceRow> convergence_study(double eps, double T,
                                              const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                              std::uint64_t seed,
                                              const SolveOptions& options) {
    check_eps_T(eps, T);
    if (eps < T / 2.0)
        throw InvalidArgumentError("convergence_study: needs eps >= T/2 so the closed form exists");
    const double target = *closed_form_value(eps, T);
    std::vector<ConvergenceRow> rows;
    rows.reserve(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const auto [n_steps, n_paths] = sizes[i];
        const TimeGrid grid = make_grid(T, n_steps);
        const BoundProblem bound = bind(shiryaev_spec(eps, T), grid);
        SolveOptions opts = options;
        if (!opts.floor_override) {
            const std::size_t m = bound.lag_steps[0];
            const std::size_t raised = std::min(m, n_steps - m);
            if (raised > bound.floor_index) opts.floor_override = raised;
        }
        RunOutput run = run_problem(bound, n_paths, n_paths, rng::row_seed(seed, i), opts);
        ConvergenceRow r;
        r.n_steps = n_steps;
        r.n_paths = n_paths;
        r.value_policy = run.policy.estimate.mean;
        r.stderr_ = run.policy.estimate.stderr_;
        r.closed_form = target;
        r.abs_error = std::abs(r.value_policy - target);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace lookstop
