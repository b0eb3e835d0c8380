#include "lookstop/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>

#include "lookstop/errors.hpp"
#include "lookstop/parallel.hpp"
#include "lookstop/rng.hpp"

namespace lookstop {

namespace {

std::vector<std::size_t> distinct_positive_lags(const BoundProblem& bound) {
    std::vector<std::size_t> lags;
    for (std::size_t m : bound.lag_steps)
        if (m > 0) lags.push_back(m);
    std::sort(lags.begin(), lags.end());
    lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
    return lags;
}

// Max of the path over the still-collectable window: the lagged indices a
// *future* stop can still reach, [(k-m+1)^+, min(k, n-m)]. The index k-m is
// the payoff collected now and enters as the lagged-level feature instead.
// Step-major like the batch. One forward sliding-window pass per path up to
// k = n-m, then suffix maxima for the tail where the right end is pinned.
// The window at k = n is empty; the last collectible level stands in.
std::vector<double> window_max_matrix(const PathBatch& batch, std::size_t m) {
    const std::size_t n = batch.grid.n_steps;
    const std::size_t np = batch.n_paths;
    const std::size_t jmax = n - m;
    const auto left_of = [m](std::size_t k) { return k + 1 >= m ? k + 1 - m : 0; };
    std::vector<double> win((n + 1) * np);
    parallel_blocks(np, [&](std::size_t, std::size_t lo, std::size_t hi) {
        std::deque<std::size_t> dq;
        std::vector<double> sufmax(jmax + 1);
        for (std::size_t p = lo; p < hi; ++p) {
            dq.clear();
            for (std::size_t k = 0; k <= jmax; ++k) {
                const double v = batch.value(p, k);
                while (!dq.empty() && batch.value(p, dq.back()) <= v) dq.pop_back();
                dq.push_back(k);
                while (dq.front() < left_of(k)) dq.pop_front();
                win[k * np + p] = batch.value(p, dq.front());
            }
            if (jmax < n) {
                sufmax[jmax] = batch.value(p, jmax);
                for (std::size_t j = jmax; j-- > 0;)
                    sufmax[j] = std::max(batch.value(p, j), sufmax[j + 1]);
                for (std::size_t k = jmax + 1; k <= n; ++k)
                    win[k * np + p] = sufmax[std::min(left_of(k), jmax)];
            }
        }
    });
    return win;
}

struct FeaturePlan {
    BasisSpec basis;
    std::vector<std::size_t> lags;         // distinct positive lags
    std::size_t n_raw = 0;
    std::vector<std::vector<int>> exponents;  // one multi-index per monomial

    std::size_t n_monomials() const { return exponents.size(); }
};

void enumerate_exponents(std::size_t nv, int degree, bool cross,
                         std::vector<std::vector<int>>& out) {
    if (cross) {
        std::vector<int> current(nv, 0);
        // all multi-indices with total degree <= degree, graded lexicographic
        std::function<void(std::size_t, int)> rec = [&](std::size_t var, int remaining) {
            if (var == nv) {
                out.push_back(current);
                return;
            }
            for (int d = 0; d <= remaining; ++d) {
                current[var] = d;
                rec(var + 1, remaining - d);
            }
            current[var] = 0;
        };
        rec(0, degree);
    } else {
        out.push_back(std::vector<int>(nv, 0));  // constant
        for (std::size_t v = 0; v < nv; ++v)
            for (int d = 1; d <= degree; ++d) {
                std::vector<int> e(nv, 0);
                e[v] = d;
                out.push_back(e);
            }
    }
}

FeaturePlan make_plan(const BasisSpec& basis, const BoundProblem& bound) {
    if (basis.degree < 1)
        throw InvalidArgumentError("basis degree must be at least 1");
    FeaturePlan plan;
    plan.basis = basis;
    plan.lags = distinct_positive_lags(bound);
    plan.n_raw = (basis.use_current ? 1 : 0) +
                 plan.lags.size() * ((basis.use_lagged ? 1 : 0) + (basis.use_window_max ? 1 : 0)) +
                 (basis.use_time_to_go ? 1 : 0);
    if (plan.n_raw == 0)
        throw InvalidArgumentError("basis selects no features");
    enumerate_exponents(plan.n_raw, basis.degree, basis.cross_terms, plan.exponents);
    return plan;
}

// Raw features of path p at step k. `wins` holds one window-max matrix per
// distinct lag, aligned with plan.lags.
inline void raw_features(const FeaturePlan& plan, const PathBatch& batch,
                         const std::vector<std::vector<double>>& wins,
                         std::size_t k, std::size_t p, double* out) {
    std::size_t f = 0;
    const std::size_t np = batch.n_paths;
    if (plan.basis.use_current) out[f++] = batch.values[k * np + p];
    for (std::size_t li = 0; li < plan.lags.size(); ++li) {
        const std::size_t j = lagged_index(k, plan.lags[li]);
        if (plan.basis.use_lagged) out[f++] = batch.values[j * np + p];
        if (plan.basis.use_window_max) out[f++] = wins[li][k * np + p];
    }
    if (plan.basis.use_time_to_go) out[f++] = batch.grid.horizon_T - batch.grid.times[k];
}

inline void expand_monomials(const FeaturePlan& plan, const double* std_raw, double* phi) {
    for (std::size_t j = 0; j < plan.exponents.size(); ++j) {
        double v = 1.0;
        const auto& e = plan.exponents[j];
        for (std::size_t r = 0; r < plan.n_raw; ++r)
            for (int d = 0; d < e[r]; ++d) v *= std_raw[r];
        phi[j] = v;
    }
}

// Per-step standardization of the raw features (deterministic blocked moments).
void standardize_step(const FeaturePlan& plan, const PathBatch& batch,
                      const std::vector<std::vector<double>>& wins, std::size_t k,
                      std::vector<double>& mean, std::vector<double>& scale) {
    const std::size_t np = batch.n_paths;
    const std::size_t nv = plan.n_raw;
    const std::size_t nblocks = block_count(np);
    std::vector<double> sums(nblocks * nv, 0.0), sqs(nblocks * nv, 0.0);
    parallel_blocks(np, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        std::vector<double> raw(nv);
        double* s = sums.data() + b * nv;
        double* q = sqs.data() + b * nv;
        for (std::size_t p = lo; p < hi; ++p) {
            raw_features(plan, batch, wins, k, p, raw.data());
            for (std::size_t r = 0; r < nv; ++r) {
                s[r] += raw[r];
                q[r] += raw[r] * raw[r];
            }
        }
    });
    mean.assign(nv, 0.0);
    scale.assign(nv, 1.0);
    for (std::size_t r = 0; r < nv; ++r) {
        double s = 0.0, q = 0.0;
        for (std::size_t b = 0; b < nblocks; ++b) {
            s += sums[b * nv + r];
            q += sqs[b * nv + r];
        }
        const double mu = s / static_cast<double>(np);
        const double var = std::max(0.0, q / static_cast<double>(np) - mu * mu);
        mean[r] = mu;
        scale[r] = var > 0.0 ? std::sqrt(var) : 1.0;  // constant feature: centered to zero
    }
}

// Least squares with trace-scaled ridge on precomputed design rows.
// `phi_rows` is [np x f]; returns beta.
std::vector<double> fit_ridge(const std::vector<double>& phi_rows, const std::vector<double>& target,
                              std::size_t np, std::size_t f, double ridge_rel, std::size_t step_index) {
    const std::size_t nblocks = block_count(np);
    const std::size_t tri = f * (f + 1) / 2;
    std::vector<double> gram(nblocks * tri, 0.0), rhs(nblocks * f, 0.0);
    parallel_blocks(np, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        double* g = gram.data() + b * tri;
        double* r = rhs.data() + b * f;
        for (std::size_t p = lo; p < hi; ++p) {
            const double* phi = phi_rows.data() + p * f;
            const double y = target[p];
            std::size_t idx = 0;
            for (std::size_t i = 0; i < f; ++i) {
                const double pi = phi[i];
                for (std::size_t j = 0; j <= i; ++j) g[idx++] += pi * phi[j];
                r[i] += pi * y;
            }
        }
    });
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(f, f);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(f);
    for (std::size_t blk = 0; blk < nblocks; ++blk) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < f; ++i) {
            for (std::size_t j = 0; j <= i; ++j) G(i, j) += gram[blk * tri + idx++];
            b(i) += rhs[blk * f + i];
        }
    }
    for (std::size_t i = 0; i < f; ++i)
        for (std::size_t j = i + 1; j < f; ++j) G(i, j) = G(j, i);

    const double lambda = ridge_rel * G.trace() / static_cast<double>(f);
    G.diagonal().array() += lambda;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
    Eigen::VectorXd beta = ldlt.solve(b);
    if (ldlt.info() != Eigen::Success || !beta.allFinite())
        throw NumericalError("regression failed at step index " + std::to_string(step_index));
    return std::vector<double>(beta.data(), beta.data() + f);
}

void check_finite_obstacle(const ObstacleValues& obstacle) {
    const std::size_t total = obstacle.xi.size();
    std::vector<std::uint8_t> bad(block_count(total), 0);
    parallel_blocks(total, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            if (!std::isfinite(obstacle.xi[i])) { bad[b] = 1; return; }
    });
    for (auto flag : bad)
        if (flag) throw DataError("obstacle contains non-finite values");
}

struct PreparedFeatures {
    FeaturePlan plan;
    std::vector<std::vector<double>> wins;  // one matrix per distinct lag
};

PreparedFeatures prepare_features(const BasisSpec& basis, const BoundProblem& bound,
                                  const PathBatch& batch) {
    PreparedFeatures prep;
    prep.plan = make_plan(basis, bound);
    if (basis.use_window_max)
        for (std::size_t m : prep.plan.lags)
            prep.wins.push_back(window_max_matrix(batch, m));
    else
        prep.wins.resize(prep.plan.lags.size());
    return prep;
}

// Builds the standardized design rows for step k into phi_rows [np x f].
void build_design(const FeaturePlan& plan, const PathBatch& batch,
                  const std::vector<std::vector<double>>& wins, std::size_t k,
                  const std::vector<double>& mean, const std::vector<double>& scale,
                  std::vector<double>& phi_rows) {
    const std::size_t np = batch.n_paths;
    const std::size_t f = plan.n_monomials();
    parallel_blocks(np, [&](std::size_t, std::size_t lo, std::size_t hi) {
        std::vector<double> raw(plan.n_raw);
        for (std::size_t p = lo; p < hi; ++p) {
            raw_features(plan, batch, wins, k, p, raw.data());
            for (std::size_t r = 0; r < plan.n_raw; ++r)
                raw[r] = (raw[r] - mean[r]) / scale[r];
            expand_monomials(plan, raw.data(), phi_rows.data() + p * f);
        }
    });
}

}  // namespace

RbsdeSolution solve(const PathBatch& batch, const ObstacleValues& obstacle,
                    const BoundProblem& bound, const SolveOptions& options) {
    if (!batch.grid.same_as(bound.grid) || obstacle.n_paths != batch.n_paths ||
        !obstacle.grid.same_as(batch.grid))
        throw InvalidArgumentError("solve: batch, obstacle and bound problem must share grid and size");
    check_finite_obstacle(obstacle);

    const std::size_t n = batch.grid.n_steps;
    const std::size_t np = batch.n_paths;
    std::size_t floor = bound.floor_index;
    if (options.floor_override) {
        if (*options.floor_override < bound.floor_index || *options.floor_override > n)
            throw InvalidArgumentError("solve: floor override outside [problem floor, n_steps]");
        floor = *options.floor_override;
    }

    PreparedFeatures prep = prepare_features(options.basis, bound, batch);
    const FeaturePlan& plan = prep.plan;
    const std::size_t f = plan.n_monomials();
    if (np < 2)
        throw InvalidArgumentError("solve: need at least 2 paths");

    RbsdeSolution sol;
    sol.grid = batch.grid;
    sol.n_paths = np;
    sol.floor_index = floor;
    sol.problem_floor = bound.floor_index;
    sol.basis = options.basis;
    sol.n_features = f;
    sol.seed = batch.seed;
    sol.regressions.resize(n);
    sol.k_mass_profile.assign(n + 1, 0.0);
    sol.y_mean_profile.assign(n + 1, 0.0);
    sol.dy_mean_profile.assign(n, 0.0);
    sol.dy_stderr_profile.assign(n, 0.0);
    if (options.keep_y) sol.y.assign((n + 1) * np, 0.0);
    if (options.keep_k) sol.k_inc.assign((n + 1) * np, 0.0);

    // stop decisions per (step, path), bit-packed per step
    const std::size_t words_per_step = (np + 63) / 64;
    std::vector<std::uint64_t> stop_bits((n + 1) * words_per_step, 0);
    auto set_stop = [&](std::size_t k, std::size_t p) {
        stop_bits[k * words_per_step + p / 64] |= std::uint64_t{1} << (p % 64);
    };

    std::vector<double> y_next(obstacle.step_slice(n), obstacle.step_slice(n) + np);
    sol.y_mean_profile[n] = blocked_moments(np, [&](std::size_t p) { return y_next[p]; }).mean;
    if (options.keep_y)
        std::copy(y_next.begin(), y_next.end(), sol.y.begin() + n * np);
    for (std::size_t p = 0; p < np; ++p) set_stop(n, p);
    if (floor == n) sol.y_floor = y_next;

    std::vector<double> y_cur(np), phi_rows(np * f);
    std::vector<double> mean, scale;

    for (std::size_t k = n; k-- > 0;) {
        standardize_step(plan, batch, prep.wins, k, mean, scale);
        build_design(plan, batch, prep.wins, k, mean, scale, phi_rows);
        std::vector<double> beta = fit_ridge(phi_rows, y_next, np, f, options.ridge_rel, k);

        const double* xi = obstacle.step_slice(k);
        const bool reflect = k >= floor;
        const std::size_t nblocks = block_count(np);
        std::vector<double> kmass(nblocks, 0.0), dys(nblocks, 0.0), dyq(nblocks, 0.0);
        parallel_blocks(np, [&](std::size_t b, std::size_t lo, std::size_t hi) {
            double km = 0.0, ds = 0.0, dq = 0.0;
            for (std::size_t p = lo; p < hi; ++p) {
                const double* phi = phi_rows.data() + p * f;
                double c = 0.0;
                for (std::size_t j = 0; j < f; ++j) c += phi[j] * beta[j];
                double yk, dk = 0.0;
                if (reflect && xi[p] >= c) {
                    yk = xi[p];
                    dk = xi[p] - c;
                    set_stop(k, p);
                } else {
                    yk = c;
                }
                y_cur[p] = yk;
                if (options.keep_y) sol.y[k * np + p] = yk;
                if (options.keep_k) sol.k_inc[k * np + p] = dk;
                km += dk;
                const double dy = y_next[p] - yk;
                ds += dy;
                dq += dy * dy;
            }
            kmass[b] = km;
            dys[b] = ds;
            dyq[b] = dq;
        });
        double km = 0.0, ds = 0.0, dq = 0.0;
        for (std::size_t b = 0; b < nblocks; ++b) {
            km += kmass[b];
            ds += dys[b];
            dq += dyq[b];
        }
        sol.k_mass_profile[k] = km / static_cast<double>(np);
        const double dmean = ds / static_cast<double>(np);
        sol.dy_mean_profile[k] = dmean;
        if (np > 1) {
            const double var = std::max(0.0, (dq - static_cast<double>(np) * dmean * dmean) /
                                                 static_cast<double>(np - 1));
            sol.dy_stderr_profile[k] = std::sqrt(var / static_cast<double>(np));
        }
        sol.y_mean_profile[k] = blocked_moments(np, [&](std::size_t p) { return y_cur[p]; }).mean;

        StepRegression reg;
        reg.feat_mean = mean;
        reg.feat_scale = scale;
        reg.beta = std::move(beta);
        sol.regressions[k] = std::move(reg);

        y_next.swap(y_cur);
        if (k == floor) sol.y_floor = y_next;
    }

    // First stop at or after the floor; the terminal bit guarantees one.
    sol.rule.resize(np);
    parallel_blocks(np, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            std::size_t k = floor;
            while (k < n && !(stop_bits[k * words_per_step + p / 64] >> (p % 64) & 1)) ++k;
            sol.rule[p] = k;
        }
    });

    Moments m = blocked_moments(np, [&](std::size_t p) { return sol.y_floor[p]; });
    sol.value_insample = {m.mean, m.stderr_of_mean(), np, ValueEstimate::Bias::insample_high};
    return sol;
}

namespace {

// Continuation value at step k for one path of a *fresh* batch, replaying the
// frozen standardization and coefficients.
inline double replay_continuation(const RbsdeSolution& sol, const FeaturePlan& plan,
                                  const PathBatch& batch, const std::vector<std::vector<double>>& wins,
                                  std::size_t k, std::size_t p, double* raw, double* phi) {
    const StepRegression& reg = sol.regressions[k];
    raw_features(plan, batch, wins, k, p, raw);
    for (std::size_t r = 0; r < plan.n_raw; ++r)
        raw[r] = (raw[r] - reg.feat_mean[r]) / reg.feat_scale[r];
    expand_monomials(plan, raw, phi);
    double c = 0.0;
    for (std::size_t j = 0; j < plan.exponents.size(); ++j) c += phi[j] * reg.beta[j];
    return c;
}

void eval_policy_on(const RbsdeSolution& sol, const BoundProblem& bound,
                    const PathBatch& fresh, const ObstacleValues& fresh_obstacle,
                    double& sum, double& sumsq, std::vector<std::uint64_t>& histogram) {
    const std::size_t n = fresh.grid.n_steps;
    const std::size_t np = fresh.n_paths;
    const std::size_t floor = sol.floor_index;
    PreparedFeatures prep = prepare_features(sol.basis, bound, fresh);
    const FeaturePlan& plan = prep.plan;

    const std::size_t nblocks = block_count(np);
    std::vector<double> bsum(nblocks, 0.0), bsq(nblocks, 0.0);
    std::vector<std::vector<std::uint64_t>> bhist(nblocks);
    parallel_blocks(np, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        std::vector<double> raw(plan.n_raw), phi(plan.n_monomials());
        bhist[b].assign(n + 1, 0);
        double s = 0.0, q = 0.0;
        for (std::size_t p = lo; p < hi; ++p) {
            std::size_t stop = n;
            for (std::size_t k = floor; k < n; ++k) {
                const double xi = fresh_obstacle.value(p, k);
                const double c = replay_continuation(sol, plan, fresh, prep.wins, k, p, raw.data(), phi.data());
                if (xi >= c) { stop = k; break; }
            }
            const double collected = fresh_obstacle.value(p, stop);
            s += collected;
            q += collected * collected;
            bhist[b][stop] += 1;
        }
        bsum[b] = s;
        bsq[b] = q;
    });
    for (std::size_t b = 0; b < nblocks; ++b) {
        sum += bsum[b];
        sumsq += bsq[b];
        for (std::size_t k = 0; k <= n; ++k) histogram[k] += bhist[b][k];
    }
}

ValueEstimate finish_policy_estimate(double sum, double sumsq, std::size_t np) {
    ValueEstimate est;
    est.n_samples = np;
    est.bias_note = ValueEstimate::Bias::policy_low;
    est.mean = sum / static_cast<double>(np);
    if (np > 1) {
        const double var = std::max(0.0, (sumsq - static_cast<double>(np) * est.mean * est.mean) /
                                             static_cast<double>(np - 1));
        est.stderr_ = std::sqrt(var / static_cast<double>(np));
    }
    return est;
}

}  // namespace

PolicyEvalResult evaluate_policy(const RbsdeSolution& sol, const PathBatch& fresh,
                                 const ObstacleValues& fresh_obstacle, const BoundProblem& bound) {
    if (!fresh.grid.same_as(sol.grid))
        throw InvalidArgumentError("evaluate_policy: fresh batch grid does not match the solution");
    if (fresh_obstacle.n_paths != fresh.n_paths)
        throw InvalidArgumentError("evaluate_policy: obstacle size mismatch");
    PolicyEvalResult out;
    out.stop_histogram.assign(fresh.grid.n_steps + 1, 0);
    double sum = 0.0, sumsq = 0.0;
    eval_policy_on(sol, bound, fresh, fresh_obstacle, sum, sumsq, out.stop_histogram);
    out.estimate = finish_policy_estimate(sum, sumsq, fresh.n_paths);
    return out;
}

PolicyEvalResult evaluate_policy_fresh(const RbsdeSolution& sol, const BoundProblem& bound,
                                       std::size_t n_paths, std::uint64_t seed,
                                       PathKind kind, double walk_step) {
    if (n_paths == 0)
        throw InvalidArgumentError("evaluate_policy_fresh: n_paths must be at least 1");
    PolicyEvalResult out;
    out.stop_histogram.assign(sol.grid.n_steps + 1, 0);
    double sum = 0.0, sumsq = 0.0;
    // Chunked so memory stays bounded; per-path counters make the result
    // identical to a single big batch.
    const std::size_t chunk = 4 * kBlockSize;
    for (std::size_t lo = 0; lo < n_paths; lo += chunk) {
        const std::size_t hi = std::min(n_paths, lo + chunk);
        PathBatch part = kind == PathKind::brownian
                             ? simulate_brownian_range(sol.grid, lo, hi, seed)
                             : simulate_walk_range(sol.grid, lo, hi, seed, walk_step);
        ObstacleValues obs = build_obstacle(bound, part);
        eval_policy_on(sol, bound, part, obs, sum, sumsq, out.stop_histogram);
    }
    out.estimate = finish_policy_estimate(sum, sumsq, n_paths);
    return out;
}

ValueEstimate value_at_floor(const RbsdeSolution& sol) { return sol.value_insample; }

std::vector<double> estimate_Z(const RbsdeSolution& sol, const PathBatch& batch,
                               const ObstacleValues& obstacle, const BoundProblem& bound) {
    if (!batch.grid.same_as(sol.grid) || batch.n_paths != sol.n_paths)
        throw InvalidArgumentError("estimate_Z: batch does not match the solution");
    const std::size_t n = batch.grid.n_steps;
    const std::size_t np = batch.n_paths;
    const double dt = batch.grid.dt;
    PreparedFeatures prep = prepare_features(sol.basis, bound, batch);
    const FeaturePlan& plan = prep.plan;
    const std::size_t f = plan.n_monomials();

    std::vector<double> z(n * np, 0.0);
    std::vector<double> y_next(np), target(np), phi_rows(np * f);
    for (std::size_t k = 0; k < n; ++k) {
        // Y_{k+1} replayed pointwise from the frozen fit at k+1.
        parallel_blocks(np, [&](std::size_t, std::size_t lo, std::size_t hi) {
            std::vector<double> raw(plan.n_raw), phi(f);
            for (std::size_t p = lo; p < hi; ++p) {
                double y;
                if (k + 1 == n) {
                    y = obstacle.value(p, n);
                } else {
                    const double c = replay_continuation(sol, plan, batch, prep.wins, k + 1, p,
                                                         raw.data(), phi.data());
                    const double xi = obstacle.value(p, k + 1);
                    y = (k + 1 >= sol.floor_index) ? std::max(xi, c) : c;
                }
                y_next[p] = y;
                target[p] = y * (batch.value(p, k + 1) - batch.value(p, k)) / dt;
            }
        });
        const StepRegression& reg = sol.regressions[k];
        parallel_blocks(np, [&](std::size_t, std::size_t lo, std::size_t hi) {
            std::vector<double> raw(plan.n_raw);
            for (std::size_t p = lo; p < hi; ++p) {
                raw_features(plan, batch, prep.wins, k, p, raw.data());
                for (std::size_t r = 0; r < plan.n_raw; ++r)
                    raw[r] = (raw[r] - reg.feat_mean[r]) / reg.feat_scale[r];
                expand_monomials(plan, raw.data(), phi_rows.data() + p * f);
            }
        });
        std::vector<double> beta = fit_ridge(phi_rows, target, np, f, 1e-8, k);
        parallel_blocks(np, [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t p = lo; p < hi; ++p) {
                const double* phi = phi_rows.data() + p * f;
                double v = 0.0;
                for (std::size_t j = 0; j < f; ++j) v += phi[j] * beta[j];
                z[k * np + p] = v;
            }
        });
    }
    return z;
}

std::vector<std::uint64_t> stopping_histogram(const RbsdeSolution& sol) {
    std::vector<std::uint64_t> hist(sol.grid.n_steps + 1, 0);
    for (std::size_t p = 0; p < sol.n_paths; ++p) hist[sol.rule[p]] += 1;
    return hist;
}

RunOutput run_problem(const BoundProblem& bound, std::size_t n_paths, std::size_t eval_paths,
                      std::uint64_t seed, const SolveOptions& options,
                      PathKind kind, double walk_step) {
    PathBatch batch = kind == PathKind::brownian
                          ? simulate_brownian(bound.grid, n_paths, seed)
                          : simulate_walk(bound.grid, n_paths, seed, walk_step);
    ObstacleValues obstacle = build_obstacle(bound, batch);
    RunOutput out;
    out.probe = integrability_probe(obstacle);
    out.solution = solve(batch, obstacle, bound, options);
    out.policy = evaluate_policy_fresh(out.solution, bound, eval_paths,
                                       rng::policy_eval_seed(seed), kind, walk_step);
    out.solution.value_policy = out.policy.estimate;
    return out;
}

}  // namespace lookstop
