#pragma once

// Beta-distribution trust function shared by every model in the library.

#include <cmath>
#include <stdexcept>
#include <string>

namespace stereotrust {

/// Success / failure tallies between two entities. Counts are real-valued
/// because weighted aggregation (SOP) produces fractional parameters.
struct OutcomeCounts {
  double successes = 0.0;
  double failures = 0.0;

  constexpr double total() const noexcept { return successes + failures; }

  OutcomeCounts& operator+=(const OutcomeCounts& other) noexcept {
    successes += other.successes;
    failures += other.failures;
    return *this;
  }

  friend OutcomeCounts operator+(OutcomeCounts a, const OutcomeCounts& b) noexcept {
    a += b;
    return a;
  }

  friend OutcomeCounts operator*(double w, const OutcomeCounts& c) noexcept {
    return {w * c.successes, w * c.failures};
  }

  friend bool operator==(const OutcomeCounts&, const OutcomeCounts&) = default;

  void record(bool success) noexcept {
    if (success) {
      successes += 1.0;
    } else {
      failures += 1.0;
    }
  }
};

inline void validate(const OutcomeCounts& c) {
  if (!std::isfinite(c.successes) || !std::isfinite(c.failures) || c.successes < 0.0 ||
      c.failures < 0.0) {
    throw std::domain_error("outcome counts must be finite and non-negative");
  }
}

/// Expected value (s+1)/(s+u+2) of the Beta(s+1, u+1) trust function.
inline double expected_trust(const OutcomeCounts& c) {
  validate(c);
  return (c.successes + 1.0) / (c.successes + c.failures + 2.0);
}

/// Beta(s+1, u+1) density at p. Evaluated in log space via lgamma so large or
/// fractional counts stay finite.
inline double trust_density(const OutcomeCounts& c, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("trust rating p must lie in [0,1], got " + std::to_string(p));
  }
  validate(c);
  const double s = c.successes;
  const double u = c.failures;
  // Endpoints: continuous extension of p^s (1-p)^u with 0^0 = 1.
  if ((p == 0.0 && s > 0.0) || (p == 1.0 && u > 0.0)) {
    return 0.0;
  }
  const double log_norm = std::lgamma(s + u + 2.0) - std::lgamma(s + 1.0) - std::lgamma(u + 1.0);
  double log_kernel = 0.0;
  if (s > 0.0) log_kernel += s * std::log(p);
  if (u > 0.0) log_kernel += u * std::log1p(-p);
  return std::exp(log_norm + log_kernel);
}

/// A beta trust function identified by its counts, with its expected value cached.
struct TrustEstimate {
  OutcomeCounts counts;
  double expected = 0.5;

  static TrustEstimate from_counts(const OutcomeCounts& c) { return {c, expected_trust(c)}; }

  double density(double p) const { return trust_density(counts, p); }
};

}  // namespace stereotrust
