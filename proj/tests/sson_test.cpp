#include <gtest/gtest.h>

#include "stereotrust/sson.hpp"

using namespace stereotrust;

TEST(MinConfident, ChernoffClosedForm) {
  EXPECT_EQ(min_confident_transactions(0.1, 0.95), 185u);
  EXPECT_EQ(min_confident_transactions(0.5, 0.95), 8u);
  EXPECT_EQ(min_confident_transactions(0.99, 0.01), 1u);
  EXPECT_THROW(min_confident_transactions(0.0, 0.95), std::domain_error);
}

TEST(ProviderList, SortedByTrustThenId) {
  const std::vector<AgentId> ids{7, 3, 5};
  ProviderList list(0, ids);
  EXPECT_EQ(list.entries()[0].provider, 3u);
  list.record_recommendation_outcome(7, true, true);
  list.record_recommendation_outcome(5, true, false);
  EXPECT_EQ(list.entries()[0].provider, 7u);
  EXPECT_DOUBLE_EQ(list.entries()[0].trust, 2.0 / 3.0);
  EXPECT_EQ(list.entries().back().provider, 5u);
  EXPECT_THROW(list.record_recommendation_outcome(9, true, true), std::domain_error);
  list.add(0);  // the owner never lists itself
  EXPECT_EQ(list.entries().size(), 3u);
}

namespace {

StereotypeResponse response(AgentId provider, OutcomeCounts c) {
  FeatureVector pred(2);
  pred.set(0, 1);
  return {provider, {{provider, pred, c, c.total()}}};
}

}  // namespace

TEST(CombineExternal, WeightsByProviderTrust) {
  const std::vector<StereotypeResponse> rs{response(1, {9, 1}), response(2, {1, 9})};
  const std::vector<ProviderScore> scores{{1, 3, 0, 0.8}, {2, 0, 3, 0.2}};
  const auto r = combine_external(rs, scores, Aggregation::sof);
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->expected, 0.8 * (10.0 / 12.0) + 0.2 * (2.0 / 12.0), 1e-15);
}

TEST(CombineExternal, NothingToCombine) {
  EXPECT_FALSE(combine_external({}, {}, Aggregation::sof));
  const std::vector<StereotypeResponse> rs{response(1, {1, 1})};
  const std::vector<ProviderScore> zero{{1, 0, 0, 0.0}};
  EXPECT_FALSE(combine_external(rs, zero, Aggregation::sof));
}

TEST(Wire, RequestResponseRoundTrip) {
  const StereotypeRequest req{4, FeatureVector{1, -1, 0}, 3};
  const auto back = request_from_json(to_json(req));
  EXPECT_EQ(back.requester, 4u);
  EXPECT_EQ(back.pattern, req.pattern);
  EXPECT_EQ(back.k, 3u);
  const auto rsp = response(2, {4, 1});
  const auto rb = response_from_json(to_json(rsp));
  ASSERT_EQ(rb.stereotypes.size(), 1u);
  EXPECT_EQ(rb.stereotypes[0].counts.successes, 4.0);
  EXPECT_EQ(rb.stereotypes[0].predicate, rsp.stereotypes[0].predicate);
}

TEST(Export, ThresholdIsMonotone) {
  ProfileTable p{FeatureVector{0, 0}, FeatureVector{1, 0}, FeatureVector{0, 1}};
  TrustorState st(0, p);
  std::uint64_t seq = 0;
  for (int i = 0; i < 10; ++i) st.add({0, 1, 0, true, 1.0, ++seq});
  for (int i = 0; i < 3; ++i) st.add({0, 2, 1, false, 0.0, ++seq});
  st.rebuild();
  EXPECT_EQ(exportable_stereotypes(st, 1).size(), 2u);
  EXPECT_EQ(exportable_stereotypes(st, 5).size(), 1u);
  EXPECT_EQ(exportable_stereotypes(st, 185).size(), 0u);
}
