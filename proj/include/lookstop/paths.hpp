#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace lookstop {

/// Uniform discretization of [0, T]; the shared clock of every process.
struct TimeGrid {
    double horizon_T = 0.0;
    std::size_t n_steps = 0;
    double dt = 0.0;
    std::vector<double> times;  // t_k = k * dt, k = 0..n_steps

    bool same_as(const TimeGrid& other) const {
        return n_steps == other.n_steps && horizon_T == other.horizon_T;
    }
};

/// Builds a grid with dt = T / n_steps. Throws InvalidArgumentError on
/// non-positive horizon or zero steps.
TimeGrid make_grid(double horizon_T, std::size_t n_steps);

/// max(k - lag_steps, 0): the discrete positive-part lag operator.
inline std::size_t lagged_index(std::size_t k, std::size_t lag_steps) {
    return k >= lag_steps ? k - lag_steps : 0;
}

/// Read-only view of one path's values up to and including index k.
/// Payoff evaluators receive only this prefix, so values beyond k are
/// structurally out of reach. Storage may be strided (see PathBatch).
class PathPrefix {
public:
    PathPrefix(const double* base, std::size_t stride, std::size_t count)
        : base_(base), stride_(stride), count_(count) {}

    double operator[](std::size_t j) const { return base_[j * stride_]; }
    std::size_t size() const { return count_; }      // k + 1 entries
    double back() const { return (*this)[count_ - 1]; }

private:
    const double* base_;
    std::size_t stride_;
    std::size_t count_;
};

enum class PathKind { brownian, walk };

/// A seeded batch of simulated paths on a TimeGrid.
///
/// values is stored step-major: value(p, k) = values[k * n_paths + p], so a
/// fixed time slice is contiguous (the solver's regression loops read slices).
/// Logical shape is [n_paths x (n_steps + 1)] with value(p, 0) = 0.
struct PathBatch {
    TimeGrid grid;
    std::size_t n_paths = 0;
    PathKind kind = PathKind::brownian;
    double step_size = 0.0;  // walk increment magnitude; 0 for brownian
    std::uint64_t seed = 0;
    std::vector<double> values;

    double value(std::size_t p, std::size_t k) const { return values[k * n_paths + p]; }
    double& value(std::size_t p, std::size_t k) { return values[k * n_paths + p]; }
    const double* step_slice(std::size_t k) const { return values.data() + k * n_paths; }

    PathPrefix prefix(std::size_t p, std::size_t k) const {
        return PathPrefix(values.data() + p, n_paths, k + 1);
    }
};

/// Brownian batch: increment p,k is sqrt(dt) * z(seed, p, k) with z a
/// counter-based standard normal, so any path subset is reproducible and the
/// batch is bit-identical under any thread count.
PathBatch simulate_brownian(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed);

/// Symmetric random walk batch with increments +/- step_size from fair bits
/// at the same counters.
PathBatch simulate_walk(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed, double step_size);

/// Paths [first, last) of the batch simulate_brownian(grid, n >= last, seed)
/// would produce, as a standalone batch: the counters carry global path
/// indices, so any subset is reproducible without generating the rest.
PathBatch simulate_brownian_range(const TimeGrid& grid, std::size_t first, std::size_t last,
                                  std::uint64_t seed);
PathBatch simulate_walk_range(const TimeGrid& grid, std::size_t first, std::size_t last,
                              std::uint64_t seed, double step_size);

/// Implicit full binary tree of a symmetric +/- step_size walk.
/// A node at depth k is addressed by the bit-string of its k increments
/// (bit j set = step j went up); 2^k nodes per depth.
struct WalkTree {
    std::size_t n_steps = 0;
    double step_size = 0.0;

    static constexpr std::size_t kDefaultCap = 24;

    std::size_t nodes_at(std::size_t depth) const { return std::size_t{1} << depth; }

    /// Walk level after j of the node's increments (j <= depth of the node).
    double value_at(std::uint32_t bits, std::size_t j) const {
        const std::uint32_t mask = j >= 32 ? ~0u : ((1u << j) - 1u);
        const int ups = __builtin_popcount(bits & mask);
        return step_size * (2.0 * ups - static_cast<double>(j));
    }

    /// Fills prefix[0..depth] with the node's walk levels.
    void fill_prefix(std::uint32_t bits, std::size_t depth, double* prefix) const {
        prefix[0] = 0.0;
        for (std::size_t j = 0; j < depth; ++j)
            prefix[j + 1] = prefix[j] + (((bits >> j) & 1u) ? step_size : -step_size);
    }
};

/// Checks the depth cap (default 24, ~2^24 leaves) and returns the implicit tree.
WalkTree enumerate_walk(std::size_t n_steps, double step_size, std::size_t cap = WalkTree::kDefaultCap);

/// CSV dump with header `path,k,t,value`.
std::string paths_to_csv(const PathBatch& batch);

}  // namespace lookstop
