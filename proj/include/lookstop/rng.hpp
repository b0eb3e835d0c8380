#pragma once

#include <array>
#include <cstdint>

namespace lookstop::rng {

/// Counter-based generation: every variate is a pure function of
/// (key, counter), so draws for any (path, step) pair are reproducible
/// independently of generation order or thread count.
///
/// The generator is Philox 4x32 with 10 rounds; the 64-bit stream key is
/// the user seed, the 128-bit counter carries (path index, step index).
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t ctr_hi, std::uint64_t ctr_lo);

/// Uniform double in the open interval (0, 1) built from 53 random bits.
double uniform_open01(std::uint64_t key, std::uint64_t path, std::uint64_t step);

/// Standard normal variate: inverse-CDF transform (Wichura's AS 241 PPND16,
/// accurate to ~1e-15) of the uniform draw at the same counter.
double standard_normal(std::uint64_t key, std::uint64_t path, std::uint64_t step);

/// One fair bit for +/- walk increments (exact half/half split).
bool fair_bit(std::uint64_t key, std::uint64_t path, std::uint64_t step);

/// Inverse standard normal CDF on (0, 1).
double normal_icdf(double p);

/// SplitMix64 finalizer; used to derive auxiliary stream keys
/// (e.g. policy-evaluation batches, per-row sweep seeds) from a base seed.
std::uint64_t mix64(std::uint64_t x);

/// Key for the fresh policy-evaluation batch belonging to a solve seeded
/// with `seed`; documented so runs are reproducible from the manifest.
inline std::uint64_t policy_eval_seed(std::uint64_t seed) { return mix64(seed ^ 0x9e3779b97f4a7c15ull); }

/// Per-row seed for sweep row `row` under base seed `seed`.
inline std::uint64_t row_seed(std::uint64_t seed, std::uint64_t row) { return mix64(seed + 0x9e3779b97f4a7c15ull * (row + 1)); }

}  // namespace lookstop::rng
