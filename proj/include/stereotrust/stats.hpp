#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

#include <boost/math/distributions/students_t.hpp>

namespace stereotrust {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) return std::nan("");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Two-sided Student-t confidence interval for the mean of `xs`. With fewer
/// than two samples the interval collapses to the mean.
inline std::pair<double, double> t_confidence_interval(std::span<const double> xs, double level = 0.95) {
  const double m = mean(xs);
  if (xs.size() < 2) return {m, m};
  boost::math::students_t dist(static_cast<double>(xs.size() - 1));
  const double q = boost::math::quantile(boost::math::complement(dist, (1.0 - level) / 2.0));
  const double half = q * sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
  return {m - half, m + half};
}

/// 64-bit FNV-1a, stable across platforms and runs.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace stereotrust
