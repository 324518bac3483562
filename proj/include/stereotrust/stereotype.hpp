#pragma once

// Trustor-local groups, stereotypes, and the basic StereoTrust estimate
// (SOF: mixture of group beta densities; SOP: one beta over weighted counts).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "stereotrust/feature_stats.hpp"
#include "stereotrust/trust_core.hpp"

namespace stereotrust {

using AgentId = std::uint32_t;
using GroupId = std::uint32_t;

/// Agent profiles indexed by AgentId. In the category worlds, position c of a
/// profile is 1 when the agent is interested in category c and 0 otherwise.
using ProfileTable = std::vector<FeatureVector>;

struct TransactionRecord {
  AgentId trustor = 0;
  AgentId target = 0;
  FeatureValue category = 0;
  bool outcome = false;
  double raw_rating = 0.0;
  std::uint64_t sequence = 0;
};

struct Group {
  GroupId id = 0;
  /// Profile position this group is defined on (the category).
  std::size_t feature = 0;
  FeatureVector predicate;
  /// Acquaintances whose profile matches the predicate, sorted by id.
  std::vector<AgentId> members;
};

struct Stereotype {
  GroupId group = 0;
  OutcomeCounts counts;
  double transaction_count = 0.0;
};

enum class Aggregation { sof, sop };

/// Tie rule for the honest/dishonest dichotomy when successes == failures.
enum class TieRule { honest, dishonest };

inline bool labeled_honest(const OutcomeCounts& c, TieRule tie = TieRule::honest) {
  if (c.successes == c.failures) return tie == TieRule::honest;
  return c.successes > c.failures;
}

/// Weighted mixture of beta trust functions.
struct BetaMixture {
  struct Component {
    double weight = 0.0;
    OutcomeCounts counts;
  };
  std::vector<Component> components;

  double density(double p) const {
    double d = 0.0;
    for (const auto& c : components) d += c.weight * trust_density(c.counts, p);
    return d;
  }

  double expected() const {
    double e = 0.0;
    for (const auto& c : components) e += c.weight * expected_trust(c.counts);
    return e;
  }
};

/// Result of one trust evaluation. For SOP the distribution has exactly one
/// component of weight 1.
struct TrustResult {
  double expected = 0.5;
  BetaMixture distribution;
};

/// W^i = theta^i / sum_j theta^j. Returns nullopt when every theta is zero
/// (the trustor has no local knowledge about the matched groups).
inline std::optional<std::vector<double>> group_weights(std::span<const Stereotype> matched) {
  double total = 0.0;
  for (const auto& s : matched) total += s.transaction_count;
  if (matched.empty() || total <= 0.0) return std::nullopt;
  std::vector<double> w;
  w.reserve(matched.size());
  for (const auto& s : matched) w.push_back(s.transaction_count / total);
  return w;
}

namespace detail {
inline void check_aligned(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("stereotypes and weights differ in length");
}
}  // namespace detail

inline double stereotrust_sof_density(std::span<const Stereotype> st, std::span<const double> w,
                                      double p) {
  detail::check_aligned(st.size(), w.size());
  double d = 0.0;
  for (std::size_t i = 0; i < st.size(); ++i) d += w[i] * trust_density(st[i].counts, p);
  return d;
}

inline double stereotrust_sof_expected(std::span<const Stereotype> st, std::span<const double> w) {
  detail::check_aligned(st.size(), w.size());
  double e = 0.0;
  for (std::size_t i = 0; i < st.size(); ++i) e += w[i] * expected_trust(st[i].counts);
  return e;
}

inline TrustResult stereotrust_sof(std::span<const Stereotype> st, std::span<const double> w) {
  detail::check_aligned(st.size(), w.size());
  TrustResult r;
  for (std::size_t i = 0; i < st.size(); ++i) r.distribution.components.push_back({w[i], st[i].counts});
  r.expected = stereotrust_sof_expected(st, w);
  return r;
}

inline TrustEstimate stereotrust_sop(std::span<const Stereotype> st, std::span<const double> w) {
  detail::check_aligned(st.size(), w.size());
  OutcomeCounts c;
  for (std::size_t i = 0; i < st.size(); ++i) c += w[i] * st[i].counts;
  return TrustEstimate::from_counts(c);
}

inline TrustResult as_result(const TrustEstimate& e) {
  return {e.expected, BetaMixture{{{1.0, e.counts}}}};
}

inline TrustResult aggregate(Aggregation method, std::span<const Stereotype> st,
                             std::span<const double> w) {
  return method == Aggregation::sof ? stereotrust_sof(st, w) : as_result(stereotrust_sop(st, w));
}

/// Which categories get a group.
enum class GroupScope {
  /// Categories the trustor itself transacted in.
  history,
  /// Every category at least one of the trustor's partners is interested in.
  partners,
};

/// One group per selected category in scope. Members are the trustor's
/// partners whose profile carries that category; empty groups are dropped.
inline std::vector<Group> build_groups(std::span<const TransactionRecord> history,
                                       std::span<const std::size_t> selected_features,
                                       const ProfileTable& profiles, GroupScope scope = GroupScope::history) {
  std::set<AgentId> partners;
  std::set<std::size_t> seen;
  for (const auto& t : history) {
    partners.insert(t.target);
    if (t.category >= 0) seen.insert(static_cast<std::size_t>(t.category));
  }
  const std::size_t width = profiles.empty() ? 0 : profiles.front().size();
  std::set<std::size_t> selected(selected_features.begin(), selected_features.end());
  std::vector<Group> groups;
  for (std::size_t c : selected) {
    if (c >= width) continue;
    if (scope == GroupScope::history && !seen.contains(c)) continue;
    Group g;
    g.id = static_cast<GroupId>(groups.size());
    g.feature = c;
    g.predicate = FeatureVector(width);
    g.predicate.set(c, 1);
    for (AgentId a : partners) {
      if (a < profiles.size() && g.predicate.matches(profiles[a])) g.members.push_back(a);
    }
    if (!g.members.empty()) groups.push_back(std::move(g));
  }
  return groups;
}

/// Per-partner outcome counts of a trustor's history.
inline std::map<AgentId, OutcomeCounts> partner_counts(std::span<const TransactionRecord> history) {
  std::map<AgentId, OutcomeCounts> out;
  for (const auto& t : history) out[t.target].record(t.outcome);
  return out;
}

inline Stereotype form_stereotype(const std::map<AgentId, OutcomeCounts>& partners,
                                  const Group& group) {
  Stereotype s{group.id, {}, 0.0};
  for (AgentId a : group.members) {
    if (auto it = partners.find(a); it != partners.end()) s.counts += it->second;
  }
  s.transaction_count = s.counts.total();
  return s;
}

inline Stereotype form_stereotype(std::span<const TransactionRecord> history, const Group& group) {
  return form_stereotype(partner_counts(history), group);
}

/// A trustor's local model: its history, groups, stereotypes and the
/// information gain of every profile feature over its labeled partners.
///
/// Single writer: `add` and `rebuild` must not race with evaluations.
/// Evaluations only read a rebuilt snapshot, so a stale model (lazy update
/// strategies) is simply one whose `rebuild` has not been called yet.
class TrustorState {
 public:
  struct Options {
    /// Keep at most this many matched groups per target (0 = keep all).
    std::size_t max_groups = 3;
    TieRule tie = TieRule::honest;
    GroupScope scope = GroupScope::history;
  };

  TrustorState(AgentId self, const ProfileTable& profiles) : TrustorState(self, profiles, Options{}) {}
  TrustorState(AgentId self, const ProfileTable& profiles, Options opts)
      : self_(self), profiles_(&profiles), opts_(opts) {}

  AgentId self() const noexcept { return self_; }
  const Options& options() const noexcept { return opts_; }
  const ProfileTable& profiles() const noexcept { return *profiles_; }

  void add(const TransactionRecord& t) {
    if (t.trustor != self_) throw std::invalid_argument("transaction belongs to another trustor");
    if (!history_.empty() && t.sequence <= history_.back().sequence) {
      throw std::invalid_argument("transaction sequence must be strictly increasing");
    }
    history_.push_back(t);
  }

  /// Recomputes groups, stereotypes and feature gains from the full history.
  void rebuild() {
    partners_ = partner_counts(history_);
    std::vector<std::size_t> all(width());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    groups_ = build_groups(history_, all, *profiles_, opts_.scope);
    stereotypes_.clear();
    for (const auto& g : groups_) stereotypes_.push_back(form_stereotype(partners_, g));
    gains_.assign(width(), 0.0);
    LabeledPopulation pop = labeled_partners();
    if (!pop.empty()) {
      for (std::size_t i = 0; i < gains_.size(); ++i) gains_[i] = information_gain(pop, i);
    }
    ++rebuilds_;
  }

  LabeledPopulation labeled_partners() const {
    LabeledPopulation pop;
    for (const auto& [a, c] : partners_) {
      if (a >= profiles_->size()) continue;
      pop.push_back({(*profiles_)[a], labeled_honest(c, opts_.tie) ? Label::honest : Label::dishonest});
    }
    return pop;
  }

  std::span<const TransactionRecord> history() const noexcept { return history_; }
  const std::map<AgentId, OutcomeCounts>& partners() const noexcept { return partners_; }
  const std::vector<Group>& groups() const noexcept { return groups_; }
  const std::vector<Stereotype>& stereotypes() const noexcept { return stereotypes_; }
  const std::vector<double>& feature_gains() const noexcept { return gains_; }
  std::size_t rebuild_count() const noexcept { return rebuilds_; }

  /// Indices of groups whose predicate matches `profile`, truncated to
  /// `max_groups` by (gain of defining feature desc, theta desc, id asc).
  std::vector<std::size_t> matched_groups(const FeatureVector& profile) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      if (groups_[i].predicate.matches(profile)) idx.push_back(i);
    }
    if (opts_.max_groups > 0 && idx.size() > opts_.max_groups) {
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double ga = gains_[groups_[a].feature];
        const double gb = gains_[groups_[b].feature];
        if (ga != gb) return ga > gb;
        const double ta = stereotypes_[a].transaction_count;
        const double tb = stereotypes_[b].transaction_count;
        if (ta != tb) return ta > tb;
        return groups_[a].id < groups_[b].id;
      });
      idx.resize(opts_.max_groups);
      std::sort(idx.begin(), idx.end());
    }
    return idx;
  }

  /// Basic StereoTrust. nullopt signals no local knowledge about the target.
  std::optional<TrustResult> evaluate_basic(AgentId target, Aggregation method) const {
    return evaluate_basic(profiles_->at(target), method);
  }

  std::optional<TrustResult> evaluate_basic(const FeatureVector& profile, Aggregation method) const {
    std::vector<Stereotype> matched;
    for (std::size_t i : matched_groups(profile)) matched.push_back(stereotypes_[i]);
    auto w = group_weights(matched);
    if (!w) return std::nullopt;
    return aggregate(method, matched, *w);
  }

 private:
  std::size_t width() const { return profiles_->empty() ? 0 : profiles_->front().size(); }

  AgentId self_;
  const ProfileTable* profiles_;
  Options opts_;
  std::vector<TransactionRecord> history_;
  std::map<AgentId, OutcomeCounts> partners_;
  std::vector<Group> groups_;
  std::vector<Stereotype> stereotypes_;
  std::vector<double> gains_;
  std::size_t rebuilds_ = 0;
};

}  // namespace stereotrust
