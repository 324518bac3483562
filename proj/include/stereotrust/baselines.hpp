#pragma once

// Comparison models: feedback aggregation (plain and restricted to the
// d-StereoTrust reporter set), dichotomy-only, EigenTrust and transitive trust
// over the rater graph.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "stereotrust/dichotomy.hpp"
#include "stereotrust/world.hpp"

namespace stereotrust {

/// Mean of every third-party report about `target`. Reporters are not
/// filtered, so lies go straight into the average.
inline std::optional<double> feedback_aggregation(const World& world, AgentId trustor, AgentId target) {
  double sum = 0.0;
  std::size_t n = 0;
  for (AgentId r : world.raters_of(target)) {
    if (r == trustor) continue;
    if (auto m = world.report(r, target)) {
      sum += *m;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

/// Mean over the distinct reporters d-StereoTrust consulted for this target.
inline std::optional<double> group_feedback_aggregation(const DichotomyTrace& trace) {
  std::map<AgentId, double> by_reporter;
  for (const auto& o : trace.opinions) by_reporter.emplace(o.reporter, o.fraction_successful);
  if (by_reporter.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& [r, m] : by_reporter) sum += m;
  return sum / static_cast<double>(by_reporter.size());
}

inline std::optional<double> group_feedback_aggregation(const TrustorState& trustor,
                                                        const OpinionSource& source, AgentId target) {
  return group_feedback_aggregation(trace_dichotomy(trustor, source, target));
}

/// Dichotomy without stereotypes: one honest/dishonest split of every partner
/// under a match-all group, asking the same reporter classes as d-StereoTrust,
/// weight 1. Falls back to the whole-history beta when no opinion is available.
inline std::optional<TrustResult> dichotomy_only(const TrustorState& trustor, const OpinionSource& source,
                                                 AgentId target, Aggregation method, OpinionQuery query = {}) {
  const auto& partners = trustor.partners();
  if (partners.empty()) return std::nullopt;
  Group all;
  all.predicate = FeatureVector(source.profile(target).size());
  for (const auto& [a, c] : partners) all.members.push_back(a);
  SubgroupPair pair = split_group(partners, all, trustor.options().tie);
  if (pair.honest_members.empty() && pair.dishonest_members.empty()) return std::nullopt;

  const auto ops = collect_opinions(source, trustor, target, all, pair, query);
  const std::array<double, 1> w{1.0};
  auto close = closeness(ops, pair, partners);
  if (!close) {
    SubgroupPair whole;
    whole.honest_counts = pair.honest_counts + pair.dishonest_counts;
    const std::array<ClosenessPair, 1> c{ClosenessPair{1.0, 0.0}};
    return dstereotrust(method, std::span(&whole, 1), c, w);
  }
  const std::array<ClosenessPair, 1> c{*close};
  return dstereotrust(method, std::span(&pair, 1), c, w);
}

// ---------------------------------------------------------------------------
// Trust graph

struct TrustEdge {
  AgentId to = 0;
  OutcomeCounts counts;
  /// expected_trust(counts)
  double trust = 0.5;
};

/// Directed graph i -> j whenever i transacted with j at least once.
class TrustGraph {
 public:
  TrustGraph() = default;
  explicit TrustGraph(std::size_t n) : out_(n) {}

  static TrustGraph from_world(const World& w) {
    TrustGraph g(w.agent_count());
    for (AgentId i = 0; i < w.agent_count(); ++i) {
      for (const auto& [j, c] : w.out_counts(i)) {
        if (j != i && c.total() > 0.0) g.add_edge(i, j, c);
      }
    }
    g.finalize();
    return g;
  }

  void add_edge(AgentId from, AgentId to, const OutcomeCounts& c) {
    out_.at(from).push_back({to, c, expected_trust(c)});
  }

  /// Sorts adjacency lists by target id; call after the last add_edge.
  void finalize() {
    for (auto& v : out_) {
      std::sort(v.begin(), v.end(), [](const TrustEdge& a, const TrustEdge& b) { return a.to < b.to; });
    }
  }

  std::size_t size() const noexcept { return out_.size(); }
  const std::vector<TrustEdge>& out(AgentId a) const { return out_.at(a); }

  const TrustEdge* edge(AgentId from, AgentId to) const {
    const auto& v = out_.at(from);
    auto it = std::lower_bound(v.begin(), v.end(), to, [](const TrustEdge& e, AgentId t) { return e.to < t; });
    return (it != v.end() && it->to == to) ? &*it : nullptr;
  }

 private:
  std::vector<std::vector<TrustEdge>> out_;
};

struct EigenTrustOptions {
  double damping = 0.5;
  double epsilon = 1e-4;
  std::size_t max_iterations = 10000;
};

/// Power iteration t <- (1-a) C^T t + a p, where C row-normalizes
/// max(s - u, 0) and p is uniform over the pre-trusted agents. Rows without
/// positive local trust redistribute to p.
inline std::vector<double> eigentrust(const TrustGraph& g, std::span<const AgentId> pretrusted,
                                      EigenTrustOptions opts = {}) {
  const std::size_t n = g.size();
  if (n == 0) throw std::domain_error("eigentrust on an empty graph");
  if (pretrusted.empty()) throw std::domain_error("eigentrust needs at least one pre-trusted agent");
  std::vector<double> p(n, 0.0);
  for (AgentId a : pretrusted) p.at(a) = 1.0;
  const double mass = static_cast<double>(std::set<AgentId>(pretrusted.begin(), pretrusted.end()).size());
  for (double& x : p) x /= mass;

  std::vector<double> row_sum(n, 0.0);
  for (AgentId i = 0; i < n; ++i) {
    for (const auto& e : g.out(i)) row_sum[i] += std::max(e.counts.successes - e.counts.failures, 0.0);
  }

  std::vector<double> t = p;
  std::vector<double> next(n);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    double dangling = 0.0;
    for (AgentId i = 0; i < n; ++i) {
      if (row_sum[i] <= 0.0) {
        dangling += t[i];
        continue;
      }
      for (const auto& e : g.out(i)) {
        const double c = std::max(e.counts.successes - e.counts.failures, 0.0) / row_sum[i];
        next[e.to] += t[i] * c;
      }
    }
    double diff = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      next[j] = (1.0 - opts.damping) * (next[j] + dangling * p[j]) + opts.damping * p[j];
      diff += std::abs(next[j] - t[j]);
    }
    t.swap(next);
    if (diff < opts.epsilon) break;
  }
  return t;
}

/// Trust in `target` from the global vector: the target's raters' local trust
/// values, weighted by each rater's global reputation.
inline std::optional<double> eigentrust_estimate(const TrustGraph& g, std::span<const double> global,
                                                 AgentId target) {
  double num = 0.0;
  double den = 0.0;
  for (AgentId j = 0; j < g.size(); ++j) {
    if (j == target) continue;
    if (const TrustEdge* e = g.edge(j, target)) {
      num += global[j] * e->trust;
      den += global[j];
    }
  }
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

/// Hop-shortest path; among equally short paths the one with the largest
/// bottleneck trust wins (lowest predecessor id on further ties). Returns
/// the trust of the path's final edge into `target`.
inline std::optional<double> transitive_shortest_path(const TrustGraph& g, AgentId trustor, AgentId target) {
  if (trustor == target) return std::nullopt;
  const std::size_t n = g.size();
  constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n, kUnseen);
  std::vector<double> best(n, -1.0);
  std::vector<AgentId> order;
  std::deque<AgentId> queue{trustor};
  dist[trustor] = 0;
  best[trustor] = std::numeric_limits<double>::infinity();
  while (!queue.empty()) {
    const AgentId u = queue.front();
    queue.pop_front();
    order.push_back(u);
    if (u == target) break;
    for (const auto& e : g.out(u)) {
      if (dist[e.to] == kUnseen) {
        dist[e.to] = dist[u] + 1;
        queue.push_back(e.to);
      }
    }
  }
  if (dist[target] == kUnseen) return std::nullopt;
  // BFS order visits every node of layer k before layer k+1, so the
  // bottleneck DP over shortest-path edges can run in that order.
  for (AgentId u : order) {
    if (u == target) break;
    for (const auto& e : g.out(u)) {
      if (dist[e.to] == dist[u] + 1) best[e.to] = std::max(best[e.to], std::min(best[u], e.trust));
    }
  }
  std::optional<double> final_edge;
  double best_bottleneck = -1.0;
  for (AgentId u : order) {
    if (dist[u] + 1 != dist[target]) continue;
    if (const TrustEdge* e = g.edge(u, target)) {
      const double b = std::min(best[u], e->trust);
      if (b > best_bottleneck) {
        best_bottleneck = b;
        final_edge = e->trust;
      }
    }
  }
  return final_edge;
}

/// Greedy walk along each node's most trusted unvisited neighbor until some
/// node on the walk knows `target`, within `max_hops` edges.
inline std::optional<double> transitive_most_reliable_path(const TrustGraph& g, AgentId trustor,
                                                           AgentId target, std::size_t max_hops = 6) {
  if (trustor == target || max_hops == 0) return std::nullopt;
  std::vector<bool> visited(g.size(), false);
  AgentId current = trustor;
  visited[current] = true;
  for (std::size_t hops = 0; hops < max_hops; ++hops) {
    if (const TrustEdge* e = g.edge(current, target)) return e->trust;
    if (hops + 1 >= max_hops) break;
    const TrustEdge* next = nullptr;
    for (const auto& e : g.out(current)) {
      if (visited[e.to] || e.to == target) continue;
      if (!next || e.trust > next->trust) next = &e;
    }
    if (!next) break;
    current = next->to;
    visited[current] = true;
  }
  return std::nullopt;
}

}  // namespace stereotrust
