#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "lookstop/obstacle.hpp"
#include "lookstop/paths.hpp"

namespace lookstop {

/// Exact solution of the lagged stopping problem on the full walk tree.
struct OracleResult {
    double value_at_floor = 0.0;          // E Y at the floor depth (= the problem value)
    std::vector<double> value_profile;    // E Y_k for every depth k
    std::vector<std::uint8_t> rule_stop;  // stop decision per node, depth-major
    std::uint64_t node_count = 0;
    std::size_t floor_index = 0;

    static std::size_t node_offset(std::size_t depth) { return (std::size_t{1} << depth) - 1; }
    bool stops(std::size_t depth, std::uint32_t code) const {
        return rule_stop[node_offset(depth) + code] != 0;
    }
};

/// Full-history backward induction: V = xi at the leaves,
/// V = max(xi, mean of children) at depths >= floor, V = mean of children
/// below the floor. Ties (xi equals the continuation) stop.
OracleResult oracle_solve(const WalkTree& tree, const BoundProblem& bound);

/// An adapted stopping rule on the tree: decides at (depth, node bits) with
/// access to the node's walk prefix only. Stops are forced at the leaves and
/// forbidden below the floor regardless of the functor's answer.
using TreeRule = std::function<bool(std::size_t depth, std::uint32_t bits, const PathPrefix& prefix)>;

/// Exact expected payoff E xi_tau of an explicitly supplied rule.
double exact_rule_value(const WalkTree& tree, const BoundProblem& bound, const TreeRule& rule);

/// The "wait until the lag, then collect the watched window's max" sub-policy
/// for a single-lag problem: stops at lag + argmax of the first
/// min(lag, n - lag) levels. Its exact value realizes the waiting lower bound.
double window_max_subpolicy_value(const WalkTree& tree, const BoundProblem& bound);

/// Independent verification oracle: builds stop/continue decision tables
/// depth by depth, evaluating every node's continuation by exhaustive forward
/// play-out of all tail paths under the tables already built (no value
/// recursion). Exponential; capped at n <= 12.
double brute_force_rules(const WalkTree& tree, const BoundProblem& bound);
inline constexpr std::size_t kBruteForceCap = 12;

/// Exact value of the single-lag problem at Donsker scale delta = sqrt(T/n)
/// for each lag in `lags`; rows are (eps = m*dt, value).
std::vector<std::pair<double, double>> oracle_value_curve(
    std::size_t n_steps, double T, const std::vector<std::size_t>& lags,
    std::size_t cap = WalkTree::kDefaultCap);

}  // namespace lookstop
