#pragma once

// d-StereoTrust: every group is split into an honest and a dishonest subgroup
// by the trustor's own record with each member. Third-party opinions about the
// target decide how close it is to either side, and the subgroup betas are
// blended by that closeness before the usual group weighting.

#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "stereotrust/stereotype.hpp"

namespace stereotrust {

struct SubgroupPair {
  GroupId parent = 0;
  OutcomeCounts honest_counts;
  OutcomeCounts dishonest_counts;
  std::vector<AgentId> honest_members;
  std::vector<AgentId> dishonest_members;
};

struct OpinionSample {
  AgentId reporter = 0;
  AgentId about = 0;
  /// Fraction of the reporter's transactions with `about` that succeeded.
  double fraction_successful = 0.0;
};

struct ClosenessPair {
  double to_honest = 0.5;
  double to_dishonest = 0.5;
};

/// Read-only view of the agent society that answers opinion queries.
class OpinionSource {
 public:
  virtual ~OpinionSource() = default;
  virtual std::size_t agent_count() const = 0;
  virtual const FeatureVector& profile(AgentId agent) const = 0;
  /// The value `reporter` reports about `about`, or nullopt when the
  /// reporter never transacted with it. Dishonest reporters may lie.
  virtual std::optional<double> report(AgentId reporter, AgentId about) const = 0;
};

inline double fraction_successful(const OutcomeCounts& c) {
  return c.total() > 0.0 ? c.successes / c.total() : 0.0;
}

inline SubgroupPair split_group(const std::map<AgentId, OutcomeCounts>& partners, const Group& group,
                                TieRule tie = TieRule::honest) {
  SubgroupPair pair;
  pair.parent = group.id;
  for (AgentId a : group.members) {
    auto it = partners.find(a);
    if (it == partners.end() || it->second.total() <= 0.0) continue;
    if (labeled_honest(it->second, tie)) {
      pair.honest_members.push_back(a);
      pair.honest_counts += it->second;
    } else {
      pair.dishonest_members.push_back(a);
      pair.dishonest_counts += it->second;
    }
  }
  return pair;
}

inline SubgroupPair split_group(std::span<const TransactionRecord> history, const Group& group,
                                TieRule tie = TieRule::honest) {
  return split_group(partner_counts(history), group, tie);
}

struct OpinionQuery {
  /// Upper bound on reporters queried per group (0 = everyone eligible).
  std::size_t max_reporters = 0;
  /// Also ask group-interested agents that never transacted with the trustor.
  bool include_strangers = true;
};

/// Opinions from the honest subgroup and from agents that match the group's
/// predicate but never transacted with the trustor.
inline std::vector<OpinionSample> collect_opinions(const OpinionSource& source,
                                                   const TrustorState& trustor, AgentId target,
                                                   const Group& group, const SubgroupPair& pair,
                                                   OpinionQuery query = {}) {
  std::set<AgentId> reporters(pair.honest_members.begin(), pair.honest_members.end());
  const auto& partners = trustor.partners();
  for (AgentId a = 0; query.include_strangers && a < source.agent_count(); ++a) {
    if (a == trustor.self() || partners.contains(a)) continue;
    if (group.predicate.matches(source.profile(a))) reporters.insert(a);
  }
  reporters.erase(target);
  reporters.erase(trustor.self());

  std::vector<OpinionSample> out;
  for (AgentId r : reporters) {
    if (query.max_reporters > 0 && out.size() >= query.max_reporters) break;
    if (auto m = source.report(r, target)) out.push_back({r, target, *m});
  }
  return out;
}

namespace detail {
inline double mean_fraction(const std::map<AgentId, OutcomeCounts>& partners,
                            const std::vector<AgentId>& members) {
  double sum = 0.0;
  for (AgentId a : members) sum += fraction_successful(partners.at(a));
  return sum / static_cast<double>(members.size());
}
}  // namespace detail

/// Closeness from three aggregated opinions: the target's (m_y) and the
/// trustor's own averages over each subgroup (m_h, m_d). Zero distance to one
/// side gives that side full membership; zero to both splits evenly.
inline ClosenessPair closeness_from_means(double m_y, double m_h, double m_d) {
  const double dh = std::abs(m_y - m_h);
  const double dd = std::abs(m_y - m_d);
  if (dh == 0.0 && dd == 0.0) return {0.5, 0.5};
  if (dh == 0.0) return {1.0, 0.0};
  if (dd == 0.0) return {0.0, 1.0};
  // (1/dh) / (1/dh + 1/dd) == dd / (dh + dd)
  return {dd / (dh + dd), dh / (dh + dd)};
}

/// nullopt when no opinion is available or both subgroups are empty.
inline std::optional<ClosenessPair> closeness(std::span<const OpinionSample> opinions,
                                              const SubgroupPair& pair,
                                              const std::map<AgentId, OutcomeCounts>& partners) {
  if (opinions.empty()) return std::nullopt;
  const bool has_h = !pair.honest_members.empty();
  const bool has_d = !pair.dishonest_members.empty();
  if (!has_h && !has_d) return std::nullopt;
  if (!has_d) return ClosenessPair{1.0, 0.0};
  if (!has_h) return ClosenessPair{0.0, 1.0};
  double m_y = 0.0;
  for (const auto& o : opinions) m_y += o.fraction_successful;
  m_y /= static_cast<double>(opinions.size());
  return closeness_from_means(m_y, detail::mean_fraction(partners, pair.honest_members),
                              detail::mean_fraction(partners, pair.dishonest_members));
}

namespace detail {
inline void check_dichotomy_inputs(std::size_t pairs, std::size_t close, std::size_t weights) {
  if (pairs != close || pairs != weights) {
    throw std::invalid_argument("subgroup pairs, closeness and weights differ in length");
  }
}
}  // namespace detail

inline TrustResult dstereotrust_sof(std::span<const SubgroupPair> pairs,
                                    std::span<const ClosenessPair> close,
                                    std::span<const double> weights) {
  detail::check_dichotomy_inputs(pairs.size(), close.size(), weights.size());
  TrustResult r;
  r.expected = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    r.distribution.components.push_back({weights[i] * close[i].to_honest, pairs[i].honest_counts});
    r.distribution.components.push_back(
        {weights[i] * close[i].to_dishonest, pairs[i].dishonest_counts});
    r.expected += weights[i] * (close[i].to_honest * expected_trust(pairs[i].honest_counts) +
                                close[i].to_dishonest * expected_trust(pairs[i].dishonest_counts));
  }
  return r;
}

inline double dstereotrust_sof_density(std::span<const SubgroupPair> pairs,
                                       std::span<const ClosenessPair> close,
                                       std::span<const double> weights, double p) {
  return dstereotrust_sof(pairs, close, weights).distribution.density(p);
}

inline TrustEstimate dstereotrust_sop(std::span<const SubgroupPair> pairs,
                                      std::span<const ClosenessPair> close,
                                      std::span<const double> weights) {
  detail::check_dichotomy_inputs(pairs.size(), close.size(), weights.size());
  OutcomeCounts c;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    c.successes += weights[i] * (close[i].to_honest * pairs[i].honest_counts.successes +
                                 close[i].to_dishonest * pairs[i].dishonest_counts.successes);
    c.failures += weights[i] * (close[i].to_honest * pairs[i].honest_counts.failures +
                                close[i].to_dishonest * pairs[i].dishonest_counts.failures);
  }
  return TrustEstimate::from_counts(c);
}

inline TrustResult dstereotrust(Aggregation method, std::span<const SubgroupPair> pairs,
                                std::span<const ClosenessPair> close, std::span<const double> weights) {
  return method == Aggregation::sof ? dstereotrust_sof(pairs, close, weights)
                                    : as_result(dstereotrust_sop(pairs, close, weights));
}

/// Everything d-StereoTrust gathered for one target; also feeds the group
/// feedback aggregation baseline, which averages the same opinions.
struct DichotomyTrace {
  std::vector<std::size_t> groups;
  std::vector<SubgroupPair> pairs;
  std::vector<std::optional<ClosenessPair>> closeness;
  std::vector<OpinionSample> opinions;
};

inline DichotomyTrace trace_dichotomy(const TrustorState& trustor, const OpinionSource& source,
                                      AgentId target, OpinionQuery query = {}) {
  DichotomyTrace tr;
  tr.groups = trustor.matched_groups(source.profile(target));
  const auto tie = trustor.options().tie;
  for (std::size_t gi : tr.groups) {
    const Group& g = trustor.groups()[gi];
    SubgroupPair pair = split_group(trustor.partners(), g, tie);
    auto ops = collect_opinions(source, trustor, target, g, pair, query);
    tr.closeness.push_back(closeness(ops, pair, trustor.partners()));
    tr.opinions.insert(tr.opinions.end(), ops.begin(), ops.end());
    tr.pairs.push_back(std::move(pair));
  }
  return tr;
}

/// d-StereoTrust over the trustor's matched groups. A group without usable
/// closeness contributes its whole-group beta, so with no opinions at all the
/// result is exactly basic StereoTrust.
inline std::optional<TrustResult> evaluate_dichotomy(const TrustorState& trustor,
                                                     const OpinionSource& source, AgentId target,
                                                     Aggregation method, OpinionQuery query = {}) {
  const DichotomyTrace tr = trace_dichotomy(trustor, source, target, query);
  bool any = false;
  for (const auto& c : tr.closeness) any = any || c.has_value();
  if (!any) return trustor.evaluate_basic(source.profile(target), method);

  std::vector<Stereotype> matched;
  for (std::size_t gi : tr.groups) matched.push_back(trustor.stereotypes()[gi]);
  auto w = group_weights(matched);
  if (!w) return std::nullopt;

  std::vector<SubgroupPair> pairs;
  std::vector<ClosenessPair> close;
  for (std::size_t i = 0; i < tr.groups.size(); ++i) {
    if (tr.closeness[i]) {
      pairs.push_back(tr.pairs[i]);
      close.push_back(*tr.closeness[i]);
    } else {
      SubgroupPair whole;
      whole.parent = tr.pairs[i].parent;
      whole.honest_counts = matched[i].counts;
      pairs.push_back(std::move(whole));
      close.push_back({1.0, 0.0});
    }
  }
  return dstereotrust(method, pairs, close, *w);
}

}  // namespace stereotrust
