#pragma once

// Stereotype-sharing overlay: confidence-gated export of local stereotypes,
// per-requester lists of trusted stereotype providers, trust-weighted
// combination of external stereotypes, and recommendation-outcome updates.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "stereotrust/stereotype.hpp"

namespace stereotrust {

/// Smallest n with 2 exp(-2 n eps^2) <= 1 - confidence (two-sided
/// Chernoff-Hoeffding), i.e. ceil(-ln((1-confidence)/2) / (2 eps^2)), at least 1.
inline std::size_t min_confident_transactions(double epsilon = 0.1, double confidence = 0.95) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(confidence > 0.0 && confidence < 1.0)) {
    throw std::domain_error("epsilon and confidence must lie in (0,1)");
  }
  const double n = -std::log((1.0 - confidence) / 2.0) / (2.0 * epsilon * epsilon);
  const double c = std::ceil(n);
  return c < 1.0 ? 1 : static_cast<std::size_t>(c);
}

struct SharedStereotype {
  AgentId provider = 0;
  FeatureVector predicate;
  OutcomeCounts counts;
  double transaction_count = 0.0;
};

/// Stereotypes the trustor is confident enough to share.
inline std::vector<SharedStereotype> exportable_stereotypes(const TrustorState& state, std::size_t m_min) {
  std::vector<SharedStereotype> out;
  const auto& groups = state.groups();
  const auto& st = state.stereotypes();
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (st[i].transaction_count > 0.0 && st[i].transaction_count >= static_cast<double>(m_min)) {
      out.push_back({state.self(), groups[i].predicate, st[i].counts, st[i].transaction_count});
    }
  }
  return out;
}

// Wire messages. Delivered in-process by the simulator; the JSON form is
// what a networked deployment would exchange.

struct StereotypeRequest {
  AgentId requester = 0;
  FeatureVector pattern;
  std::size_t k = 5;
};

struct StereotypeResponse {
  AgentId provider = 0;
  std::vector<SharedStereotype> stereotypes;
};

inline nlohmann::json to_json(const StereotypeRequest& r) {
  return {{"type", "StereotypeRequest"}, {"requester", r.requester}, {"pattern", r.pattern.values()}, {"k", r.k}};
}

inline nlohmann::json to_json(const StereotypeResponse& r) {
  auto list = nlohmann::json::array();
  for (const auto& s : r.stereotypes) {
    list.push_back({{"provider", s.provider},
                    {"predicate", s.predicate.values()},
                    {"successes", s.counts.successes},
                    {"failures", s.counts.failures},
                    {"transaction_count", s.transaction_count}});
  }
  return {{"type", "StereotypeResponse"}, {"provider", r.provider}, {"stereotypes", list}};
}

inline StereotypeRequest request_from_json(const nlohmann::json& j) {
  if (j.at("type") != "StereotypeRequest") throw std::invalid_argument("not a StereotypeRequest");
  return {j.at("requester").get<AgentId>(), FeatureVector(j.at("pattern").get<std::vector<FeatureValue>>()),
          j.at("k").get<std::size_t>()};
}

inline StereotypeResponse response_from_json(const nlohmann::json& j) {
  if (j.at("type") != "StereotypeResponse") throw std::invalid_argument("not a StereotypeResponse");
  StereotypeResponse r;
  r.provider = j.at("provider").get<AgentId>();
  for (const auto& s : j.at("stereotypes")) {
    r.stereotypes.push_back({s.at("provider").get<AgentId>(),
                             FeatureVector(s.at("predicate").get<std::vector<FeatureValue>>()),
                             {s.at("successes").get<double>(), s.at("failures").get<double>()},
                             s.at("transaction_count").get<double>()});
  }
  return r;
}

/// Anything that can answer a stereotype request.
class StereotypeProvider {
 public:
  virtual ~StereotypeProvider() = default;
  virtual StereotypeResponse respond(const StereotypeRequest& request) const = 0;
};

struct ProviderScore {
  AgentId provider = 0;
  double rec_successes = 0.0;
  double rec_failures = 0.0;
  double trust = 0.5;
};

/// A requester's Trusted Stereotype Provider list, kept sorted by
/// descending trust with ties broken by ascending agent id.
class ProviderList {
 public:
  explicit ProviderList(AgentId owner) : owner_(owner) {}
  ProviderList(AgentId owner, std::span<const AgentId> providers) : owner_(owner) {
    for (AgentId p : providers) add(p);
  }

  AgentId owner() const noexcept { return owner_; }
  const std::vector<ProviderScore>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  /// Adds a provider with no recommendation history; duplicates are ignored.
  void add(AgentId provider) {
    if (provider == owner_ || find(provider)) return;
    entries_.push_back({provider, 0.0, 0.0, 0.5});
    reorder();
  }

  const ProviderScore* find(AgentId provider) const {
    for (const auto& e : entries_) {
      if (e.provider == provider) return &e;
    }
    return nullptr;
  }

  std::vector<ProviderScore> top(std::size_t k) const {
    return {entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(std::min(k, entries_.size()))};
  }

  /// A recommendation succeeds when the provider's prediction matches the
  /// observed outcome of the requester's own transaction.
  ProviderScore record_recommendation_outcome(AgentId provider, bool predicted_success, bool observed_success) {
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const ProviderScore& e) { return e.provider == provider; });
    if (it == entries_.end()) throw std::domain_error("provider not in the list");
    if (predicted_success == observed_success) {
      it->rec_successes += 1.0;
    } else {
      it->rec_failures += 1.0;
    }
    it->trust = expected_trust({it->rec_successes, it->rec_failures});
    ProviderScore updated = *it;
    reorder();
    return updated;
  }

 private:
  void reorder() {
    std::stable_sort(entries_.begin(), entries_.end(), [](const ProviderScore& a, const ProviderScore& b) {
      if (a.trust != b.trust) return a.trust > b.trust;
      return a.provider < b.provider;
    });
  }

  AgentId owner_;
  std::vector<ProviderScore> entries_;
};

/// Queries providers in list order and keeps the first `request.k` that
/// return at least one stereotype.
inline std::vector<StereotypeResponse> request_stereotypes(
    const ProviderList& list, const StereotypeRequest& request,
    const std::function<const StereotypeProvider*(AgentId)>& lookup) {
  std::vector<StereotypeResponse> out;
  for (const auto& e : list.entries()) {
    if (out.size() >= request.k) break;
    const StereotypeProvider* p = lookup(e.provider);
    if (!p) continue;
    StereotypeResponse r = p->respond(request);
    if (!r.stereotypes.empty()) out.push_back(std::move(r));
  }
  return out;
}

/// One provider's own view: its matched stereotypes weighted by theta.
inline std::optional<TrustResult> provider_view(const StereotypeResponse& r, Aggregation method) {
  std::vector<Stereotype> st;
  for (const auto& s : r.stereotypes) st.push_back({0, s.counts, s.transaction_count});
  auto w = group_weights(st);
  if (!w) return std::nullopt;
  return aggregate(method, st, *w);
}

/// Provider-trust weighted combination, W_i = t_i / sum_j t_j, applied on
/// top of each provider's theta weighting of its own stereotypes.
inline std::optional<TrustResult> combine_external(std::span<const StereotypeResponse> responses,
                                                   std::span<const ProviderScore> scores, Aggregation method) {
  if (responses.size() != scores.size()) throw std::invalid_argument("responses and scores differ in length");
  double total_trust = 0.0;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    if (!responses[i].stereotypes.empty()) total_trust += scores[i].trust;
  }
  if (total_trust <= 0.0) return std::nullopt;

  std::vector<Stereotype> st;
  std::vector<double> w;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    const auto& r = responses[i];
    double theta = 0.0;
    for (const auto& s : r.stereotypes) theta += s.transaction_count;
    if (r.stereotypes.empty() || theta <= 0.0) continue;
    const double wi = scores[i].trust / total_trust;
    for (const auto& s : r.stereotypes) {
      st.push_back({0, s.counts, s.transaction_count});
      w.push_back(wi * s.transaction_count / theta);
    }
  }
  if (st.empty()) return std::nullopt;
  return aggregate(method, st, w);
}

}  // namespace stereotrust
