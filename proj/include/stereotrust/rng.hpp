#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace stereotrust {

/// Stateless 64-bit mixer; used to derive independent, order-free random
/// decisions (report lies, per-repetition seeds) from a base seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(a ^ splitmix64(b + 0x632BE59BD9B4E019ull));
}

/// Uniform double in [0,1) from a hash value.
constexpr double unit_from_hash(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return unit_from_hash(rng()); }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Box-Muller normal draw; avoids the implementation-defined
/// std::normal_distribution so dumps are portable across standard libraries.
inline double normal(Rng& rng, double mu, double sigma) {
  double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return mu + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// round(Normal(mu, sigma)) clamped to at least 1.
inline int positive_count(Rng& rng, double mu, double sigma) {
  const long v = std::lround(normal(rng, mu, sigma));
  return v < 1 ? 1 : static_cast<int>(v);
}

}  // namespace stereotrust
