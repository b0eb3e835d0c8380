#include "lookstop/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "lookstop/errors.hpp"
#include "lookstop/parallel.hpp"

namespace lookstop {

namespace {

void check_compatible(const WalkTree& tree, const BoundProblem& bound) {
    if (tree.n_steps != bound.grid.n_steps)
        throw InvalidArgumentError("oracle: tree depth does not match the bound problem grid");
    if (bound.floor_index > tree.n_steps)
        throw InvalidArgumentError("oracle: floor index beyond the horizon");
}

// Obstacle at a tree node: payoffs at their lagged indices over the node's
// walk prefix. `prefix` is scratch of size n_steps + 1.
double node_obstacle(const WalkTree& tree, const BoundProblem& bound,
                     std::size_t depth, std::uint32_t bits, double* prefix) {
    tree.fill_prefix(bits, depth, prefix);
    double acc = 0.0;
    for (std::size_t i = 0; i < bound.spec.payoffs.size(); ++i) {
        const std::size_t j = lagged_index(depth, bound.lag_steps[i]);
        acc += bound.spec.payoffs[i].first.eval(j, PathPrefix(prefix, 1, j + 1));
    }
    return acc;
}

}  // namespace

OracleResult oracle_solve(const WalkTree& tree, const BoundProblem& bound) {
    check_compatible(tree, bound);
    const std::size_t n = tree.n_steps;
    const std::size_t floor = bound.floor_index;

    OracleResult res;
    res.floor_index = floor;
    res.value_profile.assign(n + 1, 0.0);
    res.node_count = (std::uint64_t{2} << n) - 1;
    res.rule_stop.assign(res.node_count, 0);

    std::vector<double> next;  // V at depth k+1
    std::vector<double> cur(std::size_t{1} << n);

    for (std::size_t k = n + 1; k-- > 0;) {
        const std::size_t width = std::size_t{1} << k;
        cur.resize(width);
        const std::size_t offset = OracleResult::node_offset(k);
        std::vector<double> partial(block_count(width), 0.0);
        parallel_blocks(width, [&](std::size_t b, std::size_t lo, std::size_t hi) {
            std::vector<double> prefix(n + 1);
            double sum = 0.0;
            for (std::size_t code = lo; code < hi; ++code) {
                const double xi = node_obstacle(tree, bound, k, static_cast<std::uint32_t>(code), prefix.data());
                double v;
                bool stop;
                if (k == n) {
                    v = xi;
                    stop = true;
                } else {
                    const double cont = 0.5 * (next[code] + next[code + width]);
                    if (k >= floor) {
                        stop = xi >= cont;
                        v = stop ? xi : cont;
                    } else {
                        stop = false;
                        v = cont;
                    }
                }
                cur[code] = v;
                res.rule_stop[offset + code] = stop ? 1 : 0;
                sum += v;
            }
            partial[b] = sum;
        });
        double total = 0.0;
        for (double s : partial) total += s;
        res.value_profile[k] = total / static_cast<double>(width);
        next.swap(cur);
    }
    res.value_at_floor = res.value_profile[floor];
    return res;
}

double exact_rule_value(const WalkTree& tree, const BoundProblem& bound, const TreeRule& rule) {
    check_compatible(tree, bound);
    const std::size_t n = tree.n_steps;
    const std::size_t floor = bound.floor_index;

    std::vector<std::uint8_t> alive{1}, alive_next;
    std::vector<double> prefix(n + 1);
    double value = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t width = std::size_t{1} << k;
        const double node_weight = std::ldexp(1.0, -static_cast<int>(k));
        alive_next.assign(width * 2, 0);
        for (std::size_t code = 0; code < width; ++code) {
            if (!alive[code]) continue;
            bool stop = k == n;
            if (!stop && k >= floor) {
                tree.fill_prefix(static_cast<std::uint32_t>(code), k, prefix.data());
                stop = rule(k, static_cast<std::uint32_t>(code), PathPrefix(prefix.data(), 1, k + 1));
            }
            if (stop) {
                value += node_weight * node_obstacle(tree, bound, k, static_cast<std::uint32_t>(code), prefix.data());
            } else {
                alive_next[code] = 1;
                alive_next[code + width] = 1;
            }
        }
        alive.swap(alive_next);
    }
    return value;
}

double window_max_subpolicy_value(const WalkTree& tree, const BoundProblem& bound) {
    check_compatible(tree, bound);
    if (bound.lag_steps.size() != 1)
        throw InvalidArgumentError("window_max_subpolicy_value: single-lag problems only");
    const std::size_t n = tree.n_steps;
    const std::size_t m = bound.lag_steps[0];
    const std::size_t window = std::min(m, n - m);

    TreeRule rule = [m, window](std::size_t depth, std::uint32_t, const PathPrefix& prefix) {
        if (depth < m) return false;
        std::size_t argmax = 0;
        for (std::size_t j = 1; j <= window; ++j)
            if (prefix[j] > prefix[argmax]) argmax = j;
        return depth == m + argmax;
    };
    return exact_rule_value(tree, bound, rule);
}

double brute_force_rules(const WalkTree& tree, const BoundProblem& bound) {
    check_compatible(tree, bound);
    const std::size_t n = tree.n_steps;
    if (n > kBruteForceCap)
        throw ResourceLimitError("brute_force_rules: n = " + std::to_string(n) +
                                 " exceeds the enumeration cap of " + std::to_string(kBruteForceCap));
    const std::size_t floor = bound.floor_index;

    // tables[k][code]: stop decision at depth k. Leaves always stop.
    std::vector<std::vector<std::uint8_t>> tables(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        tables[k].assign(std::size_t{1} << k, k == n ? 1 : 0);

    std::vector<double> prefix(n + 1);

    // Payoff collected on the full path `bits` when play starts at depth k
    // and follows the already-built tables at depths > k.
    auto playout = [&](std::uint32_t bits, std::size_t k) {
        for (std::size_t j = k; j <= n; ++j) {
            const std::uint32_t code = bits & ((j >= 32 ? ~0u : (1u << j) - 1u));
            const bool stop = j == n || (j >= floor && tables[j][code] != 0);
            if (stop)
                return node_obstacle(tree, bound, j, code, prefix.data());
        }
        return 0.0;  // unreachable
    };

    for (std::size_t k = n; k-- > 0;) {
        if (k < floor) break;  // below the floor every decision is forced continue
        const std::size_t width = std::size_t{1} << k;
        const std::size_t tails = std::size_t{1} << (n - k);
        for (std::size_t code = 0; code < width; ++code) {
            double sum = 0.0;
            for (std::size_t tail = 0; tail < tails; ++tail)
                sum += playout(static_cast<std::uint32_t>(code | (tail << k)), k + 1);
            const double cont = sum / static_cast<double>(tails);
            const double xi = node_obstacle(tree, bound, k, static_cast<std::uint32_t>(code), prefix.data());
            tables[k][code] = xi >= cont ? 1 : 0;
        }
    }

    // Expected payoff of the finished rule over all equally likely paths.
    const std::size_t n_paths = std::size_t{1} << n;
    double total = 0.0;
    for (std::size_t bits = 0; bits < n_paths; ++bits)
        total += playout(static_cast<std::uint32_t>(bits), 0);
    return total / static_cast<double>(n_paths);
}

std::vector<std::pair<double, double>> oracle_value_curve(
    std::size_t n_steps, double T, const std::vector<std::size_t>& lags, std::size_t cap) {
    const TimeGrid grid = make_grid(T, n_steps);
    const WalkTree tree = enumerate_walk(n_steps, std::sqrt(T / static_cast<double>(n_steps)), cap);
    std::vector<std::pair<double, double>> rows;
    rows.reserve(lags.size());
    for (std::size_t m : lags) {
        if (m > n_steps)
            throw InvalidArgumentError("oracle_value_curve: lag steps beyond the horizon");
        const BoundProblem bound = bind(shiryaev_spec(static_cast<double>(m) * grid.dt, T), grid);
        rows.emplace_back(static_cast<double>(m) * grid.dt, oracle_solve(tree, bound).value_at_floor);
    }
    return rows;
}

}  // namespace lookstop
