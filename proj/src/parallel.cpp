#include "lookstop/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace lookstop {

namespace {
std::atomic<int> g_max_threads{0};  // 0 = unset, use hardware
}

int max_threads() {
    int n = g_max_threads.load(std::memory_order_relaxed);
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_max_threads(int n) { g_max_threads.store(n, std::memory_order_relaxed); }

void parallel_blocks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t nblocks = block_count(n);
    const std::size_t nworkers = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), nblocks);
    if (nworkers <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b)
            fn(b, b * kBlockSize, std::min(n, (b + 1) * kBlockSize));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= nblocks) return;
            fn(b, b * kBlockSize, std::min(n, (b + 1) * kBlockSize));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (std::size_t t = 0; t < nworkers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

double blocked_sum(std::size_t n, const std::function<double(std::size_t)>& fn) {
    std::vector<double> partial(block_count(n), 0.0);
    parallel_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += fn(i);
        partial[b] = s;
    });
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

double Moments::stderr_of_mean() const {
    if (n < 2) return 0.0;
    return std::sqrt(variance / static_cast<double>(n));
}

Moments blocked_moments(std::size_t n, const std::function<double(std::size_t)>& fn) {
    const std::size_t nblocks = block_count(n);
    std::vector<double> sums(nblocks, 0.0), sqsums(nblocks, 0.0);
    parallel_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        double s = 0.0, q = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            double v = fn(i);
            s += v;
            q += v * v;
        }
        sums[b] = s;
        sqsums[b] = q;
    });
    double s = 0.0, q = 0.0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        s += sums[b];
        q += sqsums[b];
    }
    Moments m;
    m.n = n;
    if (n == 0) return m;
    m.mean = s / static_cast<double>(n);
    if (n > 1) {
        double ss = q - static_cast<double>(n) * m.mean * m.mean;
        m.variance = std::max(0.0, ss / static_cast<double>(n - 1));
    }
    return m;
}

}  // namespace lookstop
