#include <gtest/gtest.h>

#include "stereotrust/feature_stats.hpp"
#include "stereotrust/rng.hpp"

using namespace stereotrust;

namespace {

LabeledPopulation population(std::initializer_list<std::pair<FeatureVector, Label>> rows) {
  LabeledPopulation pop;
  for (const auto& [f, l] : rows) pop.push_back({f, l});
  return pop;
}

}  // namespace

TEST(Entropy, BalancedSplitIsOneBit) {
  auto pop = population({{{1}, Label::honest}, {{0}, Label::dishonest}});
  EXPECT_DOUBLE_EQ(entropy(pop), 1.0);
}

TEST(Entropy, PureSplitIsZero) {
  auto pop = population({{{1}, Label::honest}, {{0}, Label::honest}});
  EXPECT_DOUBLE_EQ(entropy(pop), 0.0);
  EXPECT_THROW(entropy({}), std::domain_error);
}

TEST(InformationGain, PerfectFeatureRecoversFullEntropy) {
  auto pop = population({{{1, 0}, Label::honest},
                         {{1, 1}, Label::honest},
                         {{0, 0}, Label::dishonest},
                         {{0, 1}, Label::dishonest}});
  EXPECT_DOUBLE_EQ(information_gain(pop, 0), 1.0);
  EXPECT_DOUBLE_EQ(information_gain(pop, 1), 0.0);
  EXPECT_EQ(select_features(pop, 1), std::vector<std::size_t>{0});
}

TEST(InformationGain, ThresholdSelection) {
  auto pop = population({{{1, 0}, Label::honest},
                         {{1, 1}, Label::honest},
                         {{0, 0}, Label::dishonest},
                         {{0, 1}, Label::dishonest}});
  EXPECT_EQ(select_features(pop, 3, 0.5), std::vector<std::size_t>{0});
  EXPECT_THROW(information_gain(pop, 7), std::domain_error);
}

TEST(InformationGain, BoundedByEntropyOnRandomPopulations) {
  Rng rng(20240601);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 40);
    const std::size_t width = 1 + uniform_index(rng, 6);
    LabeledPopulation pop;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<FeatureValue> f(width);
      for (auto& v : f) v = static_cast<FeatureValue>(uniform_index(rng, 3));
      pop.push_back({FeatureVector(f), bernoulli(rng, 0.6) ? Label::honest : Label::dishonest});
    }
    const double h = entropy(pop);
    for (std::size_t k = 0; k < width; ++k) {
      const double ig = information_gain(pop, k);
      EXPECT_GE(ig, 0.0);
      EXPECT_LE(ig, h + 1e-12);
    }
  }
}

TEST(FeatureVector, WildcardMatching) {
  FeatureVector pred(3);
  pred.set(1, 1);
  EXPECT_TRUE(pred.matches(FeatureVector{0, 1, 0}));
  EXPECT_FALSE(pred.matches(FeatureVector{0, 0, 0}));
  EXPECT_FALSE(pred.matches(FeatureVector{0, 1}));
}

TEST(FeatureVector, CombineRejectsConflicts) {
  FeatureVector a(3), b(3);
  a.set(0, 1);
  b.set(2, 0);
  const auto c = combine_features(a, b);
  EXPECT_EQ(c[0], 1);
  EXPECT_TRUE(c.is_wildcard(1));
  EXPECT_EQ(c[2], 0);
  b.set(0, 0);
  EXPECT_THROW(combine_features(a, b), FeatureConflict);
}
