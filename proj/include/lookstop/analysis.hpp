#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lookstop/solver.hpp"

namespace lookstop {

/// E[max of the driving motion over [0, s]] = sqrt(2 s / pi).
double expected_max(double s);

/// Exact value of the single-lag problem when the lag is at least half the
/// horizon: sqrt(2 (T - eps) / pi). No closed form exists below T/2.
std::optional<double> closed_form_value(double eps, double T);

/// Waiting lower bound sqrt(2 (eps ^ (T - eps)) / pi) and the global upper
/// bound sqrt(2 T / pi). The lower bound is strict for eps in (0, T/2).
struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
    bool lower_is_strict = false;
};
Bounds bounds(double eps, double T);

struct SweepRow {
    double eps = 0.0;
    double value_policy = 0.0;
    double stderr_ = 0.0;
    double value_insample = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> closed_form;
};

struct SweepConfig {
    std::size_t n_steps = 500;
    std::size_t n_paths = 50000;
    std::size_t eval_paths = 50000;
    std::uint64_t seed = 1;
    SolveOptions solve_options{};
    /// Per row, restrict stops to the lag min time-to-go segment (value
    /// unchanged for the single-lag problem; the rule then honors the
    /// earliest-stop bound structurally).
    bool raise_floor = true;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ordered by eps
    double max_adjacent_jump = 0.0;
};

/// One solve per lag value (row seeds derived from the base seed and the row
/// index); reports the bound sandwich per row and the largest adjacent jump.
SweepResult sweep(double T, const std::vector<double>& eps_values, const SweepConfig& config);

struct ConvergenceRow {
    std::size_t n_steps = 0;
    std::size_t n_paths = 0;
    double value_policy = 0.0;
    double stderr_ = 0.0;
    double closed_form = 0.0;
    double abs_error = 0.0;
};

/// Discretization-bias measurement against the closed form (requires
/// eps >= T/2 so the target exists).
std::vector<ConvergenceRow> convergence_study(double eps, double T,
                                              const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                              std::uint64_t seed,
                                              const SolveOptions& options = {});

}  // namespace lookstop
