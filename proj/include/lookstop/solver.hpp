#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lookstop/obstacle.hpp"
#include "lookstop/paths.hpp"

namespace lookstop {

/// Regression basis: raw features drawn from the path state at index k
/// (current level, lagged level per distinct lag, the max over the
/// still-collectable window per lag, optional time-to-go), standardized per
/// step and expanded into monomials.
struct BasisSpec {
    bool use_current = true;
    bool use_lagged = true;
    bool use_window_max = true;
    bool use_time_to_go = false;
    int degree = 2;
    bool cross_terms = true;
};

struct ValueEstimate {
    enum class Bias { insample_high, policy_low };
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n_samples = 0;
    Bias bias_note = Bias::insample_high;
};

/// Frozen per-step fit: standardization of the raw features plus monomial
/// coefficients. Enough to re-decide stop/continue on fresh paths.
struct StepRegression {
    std::vector<double> feat_mean;
    std::vector<double> feat_scale;
    std::vector<double> beta;
};

struct SolveOptions {
    BasisSpec basis{};
    /// Raise the first admissible stop index above the problem floor.
    /// Restricting to later stops leaves the value unchanged whenever the
    /// solution is known not to stop earlier (the single-lag problem up to
    /// the lag/time-to-go minimum); the rule then respects that floor
    /// structurally. Must be >= the bound floor.
    std::optional<std::size_t> floor_override;
    bool keep_y = true;       // retain the full Y matrix
    bool keep_k = true;       // retain the full delta-K matrix
    double ridge_rel = 1e-8;  // ridge = ridge_rel * trace(X'X) / n_features
};

struct RbsdeSolution {
    TimeGrid grid;
    std::size_t n_paths = 0;
    std::size_t floor_index = 0;    // effective floor used by the recursion
    std::size_t problem_floor = 0;  // floor of the bound problem
    BasisSpec basis;
    std::size_t n_features = 0;
    std::uint64_t seed = 0;  // seed of the fitting batch

    std::vector<StepRegression> regressions;  // index k in [0, n_steps)

    // Step-major matrices, empty unless kept via SolveOptions.
    std::vector<double> y;
    std::vector<double> k_inc;

    std::vector<double> y_floor;       // Y at the floor index, always kept
    std::vector<std::size_t> rule;     // in-sample first stop index per path

    std::vector<double> k_mass_profile;    // mean delta-K per step
    std::vector<double> y_mean_profile;    // mean Y per step
    std::vector<double> dy_mean_profile;   // mean of Y_{k+1} - Y_k per step k
    std::vector<double> dy_stderr_profile; // stderr of that mean

    ValueEstimate value_insample;
    std::optional<ValueEstimate> value_policy;  // filled by run_problem

    double value_y(std::size_t p, std::size_t k) const { return y[k * n_paths + p]; }
    double value_dk(std::size_t p, std::size_t k) const { return k_inc[k * n_paths + p]; }
};

/// Backward recursion Y_n = xi_n; C_k = regression of Y_{k+1} on the basis;
/// Y_k = max(xi_k, C_k) and dK_k = (xi_k - C_k)^+ at k >= floor,
/// Y_k = C_k and dK_k = 0 below it. Reflection, the terminal condition,
/// dK >= 0 and dK*(Y - xi) = 0 hold exactly by construction.
RbsdeSolution solve(const PathBatch& batch, const ObstacleValues& obstacle,
                    const BoundProblem& bound, const SolveOptions& options = {});

struct PolicyEvalResult {
    ValueEstimate estimate;                    // mean of xi at the stop, fresh paths
    std::vector<std::uint64_t> stop_histogram; // stop counts per grid index
};

/// Replays the frozen rule (stop when xi_k >= fitted continuation, ties stop)
/// on an independent batch and averages the collected obstacle values.
PolicyEvalResult evaluate_policy(const RbsdeSolution& sol, const PathBatch& fresh,
                                 const ObstacleValues& fresh_obstacle, const BoundProblem& bound);

/// Same, generating the fresh batch in fixed-size blocks from `seed` so no
/// full batch is ever materialized. Results are independent of block count.
PolicyEvalResult evaluate_policy_fresh(const RbsdeSolution& sol, const BoundProblem& bound,
                                       std::size_t n_paths, std::uint64_t seed,
                                       PathKind kind = PathKind::brownian, double walk_step = 0.0);

/// Cross-path mean and stderr of Y at the floor index.
ValueEstimate value_at_floor(const RbsdeSolution& sol);

/// Diagnostic Z: per-step regression of Y_{k+1} * dW_k / dt on the same
/// basis, replaying Y_{k+1} from the frozen fits. Step-major [n_steps x n_paths].
std::vector<double> estimate_Z(const RbsdeSolution& sol, const PathBatch& batch,
                               const ObstacleValues& obstacle, const BoundProblem& bound);

/// Empirical mass function of the in-sample stopping rule over grid indices.
std::vector<std::uint64_t> stopping_histogram(const RbsdeSolution& sol);

/// simulate -> build obstacle -> solve -> fresh-batch policy evaluation.
/// The evaluation seed is derived from `seed` (rng::policy_eval_seed).
struct RunOutput {
    RbsdeSolution solution;
    PolicyEvalResult policy;
    IntegrabilityEstimate probe;
};

RunOutput run_problem(const BoundProblem& bound, std::size_t n_paths, std::size_t eval_paths,
                      std::uint64_t seed, const SolveOptions& options = {},
                      PathKind kind = PathKind::brownian, double walk_step = 0.0);

}  // namespace lookstop
