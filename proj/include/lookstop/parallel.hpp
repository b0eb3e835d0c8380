#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lookstop {

/// Process-wide worker cap used by all parallel loops. Defaults to the
/// hardware concurrency; a value of 1 forces sequential execution.
int max_threads();
void set_max_threads(int n);

/// Fixed block size used to partition path ranges. The partition depends
/// only on the item count, never on the thread count, so per-block results
/// combined in block order are bit-identical for any worker count.
inline constexpr std::size_t kBlockSize = 8192;

inline std::size_t block_count(std::size_t n) { return (n + kBlockSize - 1) / kBlockSize; }

/// Runs fn(block_index, begin, end) over [0, n) split into kBlockSize blocks.
/// Blocks may run on any thread; each block is processed whole.
void parallel_blocks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// Blocked deterministic sum of fn(i) over [0, n).
double blocked_sum(std::size_t n, const std::function<double(std::size_t)>& fn);

/// Mean and standard error accumulated blockwise (deterministic).
struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // population variance with n-1 divisor when n > 1
    std::size_t n = 0;
    double stderr_of_mean() const;
};

Moments blocked_moments(std::size_t n, const std::function<double(std::size_t)>& fn);

}  // namespace lookstop
