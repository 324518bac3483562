#pragma once

// Entropy and information-gain based feature ranking over agents labeled
// honest/dishonest, plus qualitative feature-vector combination.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stereotrust {

/// Qualitative feature value, encoded as an index into the feature's domain.
using FeatureValue = std::int32_t;
inline constexpr FeatureValue kWildcard = -1;

/// Raised when two feature vectors carry different concrete values at the
/// same position.
class FeatureConflict : public std::invalid_argument {
 public:
  FeatureConflict(std::size_t index, FeatureValue a, FeatureValue b)
      : std::invalid_argument("contradictory feature values at index " + std::to_string(index) +
                              " (" + std::to_string(a) + " vs " + std::to_string(b) + ")"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::size_t width, FeatureValue fill = kWildcard) : values_(width, fill) {}
  FeatureVector(std::initializer_list<FeatureValue> values) : values_(values) {}
  explicit FeatureVector(std::vector<FeatureValue> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  FeatureValue operator[](std::size_t i) const { return values_.at(i); }
  void set(std::size_t i, FeatureValue v) { values_.at(i) = v; }
  bool is_wildcard(std::size_t i) const { return values_.at(i) == kWildcard; }
  const std::vector<FeatureValue>& values() const noexcept { return values_; }

  /// True when every concrete position of this pattern equals the value in
  /// `profile`. Wildcards match anything.
  bool matches(const FeatureVector& profile) const {
    if (profile.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
      if (values_[i] != kWildcard && values_[i] != profile.values_[i]) return false;
    }
    return true;
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
  friend auto operator<=>(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<FeatureValue> values_;
};

/// Per-position merge: a concrete value wins over a wildcard, equal concrete
/// values are kept, differing concrete values throw FeatureConflict.
inline FeatureVector combine_features(const FeatureVector& a, const FeatureVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("feature vectors use different schemas");
  }
  FeatureVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const FeatureValue x = a[i];
    const FeatureValue y = b[i];
    if (x == kWildcard) {
      out.set(i, y);
    } else if (y == kWildcard || x == y) {
      out.set(i, x);
    } else {
      throw FeatureConflict(i, x, y);
    }
  }
  return out;
}

enum class Label : std::uint8_t { honest, dishonest };

struct LabeledEntry {
  FeatureVector features;
  Label label = Label::honest;
};

using LabeledPopulation = std::vector<LabeledEntry>;

namespace detail {

inline double binary_entropy(std::size_t honest, std::size_t total) {
  if (total == 0 || honest == 0 || honest == total) return 0.0;
  const double ph = static_cast<double>(honest) / static_cast<double>(total);
  const double pd = 1.0 - ph;
  return -ph * std::log2(ph) - pd * std::log2(pd);
}

inline std::size_t count_honest(const LabeledPopulation& pop) {
  return static_cast<std::size_t>(std::count_if(
      pop.begin(), pop.end(), [](const LabeledEntry& e) { return e.label == Label::honest; }));
}

}  // namespace detail

/// Binary entropy of the honest/dishonest split, with 0*log2(0) = 0.
inline double entropy(const LabeledPopulation& pop) {
  if (pop.empty()) throw std::domain_error("entropy of an empty population");
  return detail::binary_entropy(detail::count_honest(pop), pop.size());
}

/// Expected entropy reduction from partitioning `pop` by one feature.
inline double information_gain(const LabeledPopulation& pop, std::size_t feature_index) {
  if (pop.empty()) throw std::domain_error("information gain of an empty population");
  struct Tally {
    std::size_t honest = 0;
    std::size_t total = 0;
  };
  std::map<FeatureValue, Tally> partition;
  std::size_t honest = 0;
  for (const auto& e : pop) {
    if (feature_index >= e.features.size()) {
      throw std::domain_error("feature index " + std::to_string(feature_index) +
                              " outside the schema");
    }
    auto& t = partition[e.features[feature_index]];
    ++t.total;
    if (e.label == Label::honest) {
      ++t.honest;
      ++honest;
    }
  }
  const double n = static_cast<double>(pop.size());
  double conditional = 0.0;
  for (const auto& [value, t] : partition) {
    conditional += (static_cast<double>(t.total) / n) * detail::binary_entropy(t.honest, t.total);
  }
  return std::max(0.0, detail::binary_entropy(honest, pop.size()) - conditional);
}

struct RankedFeature {
  std::size_t index = 0;
  double gain = 0.0;
};

/// Every feature of the schema with its gain, sorted by descending gain and
/// ascending index on ties.
inline std::vector<RankedFeature> rank_features(const LabeledPopulation& pop) {
  if (pop.empty()) throw std::domain_error("cannot rank features of an empty population");
  const std::size_t width = pop.front().features.size();
  std::vector<RankedFeature> ranked;
  ranked.reserve(width);
  for (std::size_t i = 0; i < width; ++i) ranked.push_back({i, information_gain(pop, i)});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedFeature& a, const RankedFeature& b) { return a.gain > b.gain; });
  return ranked;
}

/// Top-k features by information gain, or every feature whose gain exceeds
/// `delta` when a threshold is given.
inline std::vector<std::size_t> select_features(const LabeledPopulation& pop, int k = 3,
                                                std::optional<double> delta = std::nullopt) {
  if (!delta && k <= 0) throw std::domain_error("k must be positive");
  std::vector<std::size_t> out;
  for (const auto& r : rank_features(pop)) {
    if (delta) {
      if (r.gain > *delta) out.push_back(r.index);
    } else if (out.size() < static_cast<std::size_t>(k)) {
      out.push_back(r.index);
    }
  }
  return out;
}

}  // namespace stereotrust
