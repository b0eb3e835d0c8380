#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lookstop/paths.hpp"

namespace lookstop {

/// A payoff process evaluated along a path. The evaluator sees only the
/// prefix up to its index, which enforces progressive measurability by
/// interface shape: there is no way to read past index k.
struct PayoffFunctional {
    std::string label;
    std::function<double(std::size_t k, const PathPrefix& path)> eval;
};

/// phi_k = B_k, the payoff of the look-ahead problem on the driving motion.
PayoffFunctional brownian_identity();

/// Returns the built-in payoff registered under `name`, if any.
std::optional<PayoffFunctional> builtin_payoff(const std::string& name);

/// Payoffs with their look-ahead lags, the admissible-stop floor, and the
/// horizon. Lags and floor must land on grid points once bound.
struct ProblemSpec {
    std::vector<std::pair<PayoffFunctional, double>> payoffs;  // (payoff, lag)
    double floor_eps = 0.0;
    double horizon_T = 0.0;
};

/// Single payoff B with lag eps, stop floor 0: the value of peeking eps into
/// the future before committing to a stop.
ProblemSpec shiryaev_spec(double eps, double T);

/// ProblemSpec resolved against a grid: integer lag steps and floor index.
struct BoundProblem {
    ProblemSpec spec;
    TimeGrid grid;
    std::vector<std::size_t> lag_steps;  // m_i = round(eps_i / dt)
    std::size_t floor_index = 0;         // k_eps = round(floor / dt)
};

/// Validates that every lag and the floor are integer grid multiples
/// (relative tolerance 1e-9) and resolves them to indices. Throws
/// GridMismatchError naming the offending value otherwise.
BoundProblem bind(const ProblemSpec& spec, const TimeGrid& grid);

/// xi(p, k) = sum_i phi_i at the lagged index (k - m_i)^+, per path.
/// Same step-major layout as PathBatch.
struct ObstacleValues {
    TimeGrid grid;
    std::size_t n_paths = 0;
    std::vector<double> xi;

    double value(std::size_t p, std::size_t k) const { return xi[k * n_paths + p]; }
    const double* step_slice(std::size_t k) const { return xi.data() + k * n_paths; }
};

ObstacleValues build_obstacle(const BoundProblem& bound, const PathBatch& batch);

/// Sample estimate of E[sup_k (xi_k^+)^2]; diagnostic only, never blocks a
/// solve. growth_warning is set when the running estimate keeps growing
/// across doubling subsamples (heuristic sign the second moment may not
/// be finite).
struct IntegrabilityEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n_paths = 0;
    bool growth_warning = false;
};

IntegrabilityEstimate integrability_probe(const ObstacleValues& obstacle);

}  // namespace lookstop
