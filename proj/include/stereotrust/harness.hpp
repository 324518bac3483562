#pragma once

// Experiment driver: model comparison over fresh worlds, lazy update
// strategies, and the stereotype-sharing bootstrap experiment. Also writes
// the CSV / JSON / long-format prediction outputs.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "stereotrust/baselines.hpp"
#include "stereotrust/config.hpp"
#include "stereotrust/sson.hpp"
#include "stereotrust/stats.hpp"
#include "stereotrust/world.hpp"

namespace stereotrust {

struct Prediction {
  std::size_t rep = 0;
  AgentId trustor = 0;
  AgentId target = 0;
  bool target_honest = true;
  std::string model;
  std::optional<double> value;
  double truth = 0.0;
};

struct ModelResult {
  std::string name;
  double mae_all = std::nan("");
  double mae_honest = std::nan("");
  double mae_dishonest = std::nan("");
  double ci_low = std::nan("");
  double ci_high = std::nan("");
  double coverage = 0.0;
  std::size_t pairs = 0;
  std::size_t covered = 0;
  std::vector<double> rep_mae;
};

struct StrategyResult {
  std::string name;
  double mae = std::nan("");
  double rebuilds = 0.0;
  double transactions = 0.0;
  /// Rebuild count divided by the largest count among the strategies.
  double normalized_cost = 0.0;
};

struct ExperimentReport {
  std::string kind;
  std::string config_hash;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config;
  std::vector<ModelResult> models;
  std::vector<StrategyResult> strategies;
  /// Relative MAE reduction of SSON over random provider selection.
  std::optional<double> sson_improvement;
  std::vector<Prediction> predictions;

  const ModelResult& model(const std::string& name) const {
    for (const auto& m : models) {
      if (m.name == name) return m;
    }
    throw std::out_of_range("no model '" + name + "' in report");
  }
  const StrategyResult& strategy(const std::string& name) const {
    for (const auto& s : strategies) {
      if (s.name == name) return s;
    }
    throw std::out_of_range("no strategy '" + name + "' in report");
  }
};

namespace detail {

/// Runs fn(rep) for every repetition on up to `jobs` threads. The first
/// exception is rethrown on the caller's thread.
template <typename Fn>
void for_each_rep(std::size_t reps, std::size_t jobs, Fn&& fn) {
  jobs = std::clamp<std::size_t>(jobs == 0 ? std::thread::hardware_concurrency() : jobs, 1, reps);
  if (jobs == 1) {
    for (std::size_t r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (std::size_t r = next++; r < reps; r = next++) {
        try {
          fn(r);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

inline std::uint64_t rep_seed(const ExperimentConfig& cfg, std::size_t rep) { return cfg.seed + rep; }

inline World rep_world(const ExperimentConfig& cfg, std::size_t rep, const World* shared) {
  if (shared) return *shared;
  WorldConfig wc = cfg.world;
  wc.rng_seed = rep_seed(cfg, rep);
  return generate_world(wc);
}

inline std::optional<World> shared_world(const ExperimentConfig& cfg) {
  if (!cfg.dataset) return std::nullopt;
  IngestConfig ic;
  ic.min_ratings = cfg.min_ratings;
  return ingest_dataset_file(*cfg.dataset, ic);
}

/// Explicit ids when given, otherwise `count` random honest agents that have
/// at least `min_history` transactions.
inline std::vector<AgentId> pick_trustors(const World& w, const ExperimentConfig& cfg, std::size_t count,
                                          std::uint64_t seed, std::size_t min_history = 1) {
  if (!cfg.trustor_ids.empty()) {
    for (AgentId a : cfg.trustor_ids) {
      if (a >= w.agent_count()) throw ConfigError("trustor id " + std::to_string(a) + " out of range");
    }
    return cfg.trustor_ids;
  }
  std::vector<AgentId> pool;
  for (AgentId a = 0; a < w.agent_count(); ++a) {
    if (w.is_honest(a) && w.history_of(a).size() >= min_history) pool.push_back(a);
  }
  Rng rng(mix_seed(seed, 0x7472757374ull));
  shuffle(pool, rng);
  pool.resize(std::min(count, pool.size()));
  return pool;
}

inline std::vector<AgentId> pick_targets(const World& w, const GroundTruth& gt, AgentId trustor,
                                         std::size_t count, std::uint64_t seed) {
  std::vector<AgentId> out;
  for (const auto& [a, v] : gt) {
    if (a != trustor) out.push_back(a);
  }
  if (count > 0 && count < out.size()) {
    Rng rng(mix_seed(seed, 0x746172ull + trustor));
    shuffle(out, rng);
    out.resize(count);
    std::sort(out.begin(), out.end());
  }
  (void)w;
  return out;
}

inline TrustorState build_state(const World& w, AgentId a, const ExperimentConfig& cfg,
                                std::size_t max_transactions = 0) {
  TrustorState st(a, w.profiles(), {cfg.top_k_features, cfg.tie, cfg.group_scope});
  std::size_t n = 0;
  for (const auto& t : w.history_of(a)) {
    if (max_transactions > 0 && n++ >= max_transactions) break;
    st.add(t);
  }
  st.rebuild();
  return st;
}

inline std::optional<double> expected(const std::optional<TrustResult>& r) {
  if (!r) return std::nullopt;
  return r->expected;
}

/// Per-rep error accumulator for one model.
struct Accum {
  double sum_all = 0.0, sum_h = 0.0, sum_d = 0.0;
  std::size_t n_all = 0, n_h = 0, n_d = 0, pairs = 0;

  void add(const std::optional<double>& pred, double truth, bool honest) {
    ++pairs;
    if (!pred) return;
    const double e = std::abs(*pred - truth);
    sum_all += e;
    ++n_all;
    if (honest) {
      sum_h += e;
      ++n_h;
    } else {
      sum_d += e;
      ++n_d;
    }
  }
};

inline double ratio(double s, std::size_t n) { return n > 0 ? s / static_cast<double>(n) : std::nan(""); }

/// Averages per-rep MAE (reps without coverage are skipped) and pools coverage.
inline ModelResult summarize(const std::string& name, const std::vector<Accum>& reps) {
  ModelResult m;
  m.name = name;
  std::vector<double> all, h, d;
  for (const auto& a : reps) {
    m.pairs += a.pairs;
    m.covered += a.n_all;
    if (a.n_all > 0) all.push_back(a.sum_all / static_cast<double>(a.n_all));
    if (a.n_h > 0) h.push_back(a.sum_h / static_cast<double>(a.n_h));
    if (a.n_d > 0) d.push_back(a.sum_d / static_cast<double>(a.n_d));
  }
  m.rep_mae = all;
  m.mae_all = mean(all);
  m.mae_honest = mean(h);
  m.mae_dishonest = mean(d);
  std::tie(m.ci_low, m.ci_high) = t_confidence_interval(all);
  m.coverage = m.pairs > 0 ? static_cast<double>(m.covered) / static_cast<double>(m.pairs) : 0.0;
  return m;
}

inline ExperimentReport new_report(const std::string& kind, const ExperimentConfig& cfg) {
  ExperimentReport r;
  r.kind = kind;
  r.config_hash = cfg.hash();
  r.seed = cfg.seed;
  r.config = cfg.to_json();
  return r;
}

}  // namespace detail

/// Predicts trust in `target` with one model. nullopt means no coverage.
class ModelEvaluator {
 public:
  ModelEvaluator(const World& w, const GroundTruth& gt, const ExperimentConfig& cfg, std::uint64_t seed)
      : world_(&w), gt_(&gt), cfg_(&cfg), opinions_(w) {
    const bool needs_graph = std::any_of(cfg.models.begin(), cfg.models.end(), [](Model m) {
      return m == Model::eigentrust || m == Model::transitive_sp || m == Model::transitive_mrp;
    });
    if (!needs_graph) return;
    graph_ = TrustGraph::from_world(w);
    if (std::find(cfg.models.begin(), cfg.models.end(), Model::eigentrust) != cfg.models.end()) {
      std::vector<AgentId> honest;
      for (AgentId a = 0; a < w.agent_count(); ++a) {
        if (w.is_honest(a)) honest.push_back(a);
      }
      Rng rng(mix_seed(seed, 0x707265ull));
      detail::shuffle(honest, rng);
      honest.resize(std::min(std::max<std::size_t>(cfg.pretrusted, 1), honest.size()));
      std::sort(honest.begin(), honest.end());
      if (!honest.empty()) {
        global_ = eigentrust(graph_, honest, {cfg.eigen_damping, cfg.eigen_epsilon});
      }
    }
  }

  std::optional<double> predict(Model m, const TrustorState& st, AgentId target) const {
    const OpinionQuery q{cfg_->max_reporters, cfg_->ask_strangers};
    switch (m) {
      case Model::d_stereotrust_sof:
        return detail::expected(evaluate_dichotomy(st, opinions_, target, Aggregation::sof, q));
      case Model::d_stereotrust_sop:
        return detail::expected(evaluate_dichotomy(st, opinions_, target, Aggregation::sop, q));
      case Model::stereotrust_sof:
        return detail::expected(st.evaluate_basic(target, Aggregation::sof));
      case Model::stereotrust_sop:
        return detail::expected(st.evaluate_basic(target, Aggregation::sop));
      case Model::dichotomy_only_sof:
        return detail::expected(dichotomy_only(st, opinions_, target, Aggregation::sof, q));
      case Model::dichotomy_only_sop:
        return detail::expected(dichotomy_only(st, opinions_, target, Aggregation::sop, q));
      case Model::group_feedback:
        return group_feedback_aggregation(trace_dichotomy(st, opinions_, target, q));
      case Model::feedback:
        return feedback_aggregation(*world_, st.self(), target);
      case Model::eigentrust:
        if (global_.empty()) return std::nullopt;
        return eigentrust_estimate(graph_, global_, target);
      case Model::transitive_sp:
        return transitive_shortest_path(graph_, st.self(), target);
      case Model::transitive_mrp:
        return transitive_most_reliable_path(graph_, st.self(), target, cfg_->mrp_max_hops);
      case Model::oracle:
        if (auto it = gt_->find(target); it != gt_->end()) return it->second;
        return std::nullopt;
      case Model::constant:
        return 0.5;
    }
    return std::nullopt;
  }

 private:
  const World* world_;
  const GroundTruth* gt_;
  const ExperimentConfig* cfg_;
  WorldOpinions opinions_;
  TrustGraph graph_;
  std::vector<double> global_;
};

/// Every selected model predicts every (trustor, target) pair of every
/// repetition; MAE is averaged over repetitions, coverage is pooled.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto shared = detail::shared_world(cfg);
  const std::size_t n_models = cfg.models.size();
  std::vector<std::vector<detail::Accum>> acc(cfg.repetitions, std::vector<detail::Accum>(n_models));
  std::vector<std::vector<Prediction>> preds(cfg.repetitions);

  detail::for_each_rep(cfg.repetitions, cfg.jobs, [&](std::size_t rep) {
    const std::uint64_t seed = detail::rep_seed(cfg, rep);
    const World w = detail::rep_world(cfg, rep, shared ? &*shared : nullptr);
    const GroundTruth gt = ground_truth(w, cfg.truth);
    const ModelEvaluator eval(w, gt, cfg, seed);
    for (AgentId trustor : detail::pick_trustors(w, cfg, cfg.trustors, seed)) {
      const TrustorState st = detail::build_state(w, trustor, cfg);
      for (AgentId target : detail::pick_targets(w, gt, trustor, cfg.targets, seed)) {
        const double truth = gt.at(target);
        const bool honest = w.is_honest(target);
        for (std::size_t mi = 0; mi < n_models; ++mi) {
          const auto p = eval.predict(cfg.models[mi], st, target);
          acc[rep][mi].add(p, truth, honest);
          preds[rep].push_back({rep, trustor, target, honest, to_string(cfg.models[mi]), p, truth});
        }
      }
    }
  });

  ExperimentReport report = detail::new_report("run", cfg);
  for (std::size_t mi = 0; mi < n_models; ++mi) {
    std::vector<detail::Accum> per_rep;
    for (std::size_t r = 0; r < cfg.repetitions; ++r) per_rep.push_back(acc[r][mi]);
    report.models.push_back(detail::summarize(to_string(cfg.models[mi]), per_rep));
  }
  for (auto& p : preds) report.predictions.insert(report.predictions.end(), p.begin(), p.end());
  return report;
}

enum class UpdateStrategy { eager, on_error, periodic };

/// Replays each trustor's history in order. Before every transaction the
/// trustor predicts its partner with the current (possibly stale) basic SOF
/// model, falling back to 0.5 without local knowledge; the error is taken
/// against ground truth. The model is then rebuilt per strategy.
inline ExperimentReport run_update_strategy_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto shared = detail::shared_world(cfg);
  struct Strat {
    std::string name;
    UpdateStrategy kind;
  };
  const std::vector<Strat> strategies{{"eager", UpdateStrategy::eager},
                                      {"U-A", UpdateStrategy::on_error},
                                      {"U-B(" + std::to_string(cfg.tau) + ")", UpdateStrategy::periodic}};
  struct Tally {
    double err = 0.0;
    double n = 0.0;
    double rebuilds = 0.0;
  };
  std::vector<std::vector<Tally>> tallies(cfg.repetitions, std::vector<Tally>(strategies.size()));

  detail::for_each_rep(cfg.repetitions, cfg.jobs, [&](std::size_t rep) {
    const std::uint64_t seed = detail::rep_seed(cfg, rep);
    World w;
    if (shared) {
      w = *shared;
    } else {
      WorldConfig wc = cfg.world;
      wc.rng_seed = seed;
      wc.behavior_change = cfg.strategy_behavior_change;
      w = generate_world(wc);
    }
    const GroundTruth gt = ground_truth(w, cfg.truth);
    for (AgentId trustor : detail::pick_trustors(w, cfg, cfg.trustors, seed)) {
      const auto history = w.history_of(trustor);
      for (std::size_t si = 0; si < strategies.size(); ++si) {
        TrustorState st(trustor, w.profiles(), {cfg.top_k_features, cfg.tie, cfg.group_scope});
        Tally& t = tallies[rep][si];
        std::size_t since = 0;
        for (const auto& tx : history) {
          auto it = gt.find(tx.target);
          const auto r = st.evaluate_basic(tx.target, Aggregation::sof);
          const double pred = r ? r->expected : 0.5;
          if (it != gt.end()) {
            t.err += std::abs(pred - it->second);
            t.n += 1.0;
          }
          st.add(tx);
          ++since;
          bool rebuild = false;
          switch (strategies[si].kind) {
            case UpdateStrategy::eager:
              rebuild = true;
              break;
            case UpdateStrategy::on_error:
              rebuild = (pred >= 0.5) != tx.outcome;
              break;
            case UpdateStrategy::periodic:
              rebuild = since >= cfg.tau;
              break;
          }
          if (rebuild) {
            st.rebuild();
            since = 0;
          }
        }
        t.rebuilds += static_cast<double>(st.rebuild_count());
      }
    }
  });

  ExperimentReport report = detail::new_report("update-strategies", cfg);
  double max_rebuilds = 0.0;
  for (std::size_t si = 0; si < strategies.size(); ++si) {
    Tally total;
    for (std::size_t r = 0; r < cfg.repetitions; ++r) {
      total.err += tallies[r][si].err;
      total.n += tallies[r][si].n;
      total.rebuilds += tallies[r][si].rebuilds;
    }
    StrategyResult s;
    s.name = strategies[si].name;
    s.mae = total.n > 0.0 ? total.err / total.n : std::nan("");
    s.rebuilds = total.rebuilds;
    s.transactions = total.n;
    max_rebuilds = std::max(max_rebuilds, s.rebuilds);
    report.strategies.push_back(s);
  }
  for (auto& s : report.strategies) s.normalized_cost = max_rebuilds > 0.0 ? s.rebuilds / max_rebuilds : 0.0;
  return report;
}

/// In-process provider backed by an experienced agent's full local model.
class LocalProvider final : public StereotypeProvider {
 public:
  LocalProvider(const TrustorState& state, std::size_t m_min) : state_(&state), m_min_(m_min) {}

  StereotypeResponse respond(const StereotypeRequest& request) const override {
    StereotypeResponse r;
    r.provider = state_->self();
    for (std::size_t gi : state_->matched_groups(request.pattern)) {
      const Stereotype& s = state_->stereotypes()[gi];
      if (s.transaction_count > 0.0 && s.transaction_count >= static_cast<double>(m_min_)) {
        r.stereotypes.push_back({state_->self(), state_->groups()[gi].predicate, s.counts, s.transaction_count});
      }
    }
    return r;
  }

 private:
  const TrustorState* state_;
  std::size_t m_min_;
};

/// Inexperienced honest trustors (history cut to `sson_max_local`
/// transactions) evaluate every other agent in a random order, three ways:
/// through their trusted provider list, through K randomly picked
/// providers, and with local knowledge only. After each evaluation the
/// trustor transacts with the target and scores the listed providers'
/// recommendations against that outcome.
inline ExperimentReport run_sson_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto shared = detail::shared_world(cfg);
  const std::size_t m_min = min_confident_transactions(cfg.sson_epsilon, cfg.sson_confidence);
  const std::vector<std::string> arms{"sson", "random-providers", "local-only"};
  std::vector<std::vector<detail::Accum>> acc(cfg.repetitions, std::vector<detail::Accum>(arms.size()));
  std::vector<std::vector<Prediction>> preds(cfg.repetitions);

  detail::for_each_rep(cfg.repetitions, cfg.jobs, [&](std::size_t rep) {
    const std::uint64_t seed = detail::rep_seed(cfg, rep);
    const World w = detail::rep_world(cfg, rep, shared ? &*shared : nullptr);
    const GroundTruth gt = ground_truth(w, cfg.truth);
    const std::size_t n = w.agent_count();

    std::vector<TrustorState> full;
    full.reserve(n);
    for (AgentId a = 0; a < n; ++a) full.push_back(detail::build_state(w, a, cfg));
    std::vector<LocalProvider> providers;
    providers.reserve(n);
    for (AgentId a = 0; a < n; ++a) providers.emplace_back(full[a], m_min);

    for (AgentId trustor : detail::pick_trustors(w, cfg, cfg.sson_trustors, seed)) {
      const TrustorState local = detail::build_state(w, trustor, cfg, cfg.sson_max_local);
      Rng rng(mix_seed(seed, 0x73736f6eull + trustor));
      std::vector<AgentId> others;
      for (AgentId a = 0; a < n; ++a) {
        if (a != trustor) others.push_back(a);
      }
      detail::shuffle(others, rng);
      std::vector<AgentId> seeds(others.begin(),
                                 others.begin() + static_cast<std::ptrdiff_t>(std::min(cfg.sson_list_size, others.size())));
      ProviderList list(trustor, seeds);
      ProviderList rnd_list(trustor, others);
      auto lookup = [&](AgentId a) -> const StereotypeProvider* {
        return (a < n && a != trustor) ? &providers[a] : nullptr;
      };

      for (AgentId target : detail::pick_targets(w, gt, trustor, cfg.targets, seed)) {
        const double truth = gt.at(target);
        const bool honest = w.is_honest(target);
        const FeatureVector& profile = w.profiles()[target];
        std::vector<std::optional<double>> p(arms.size());

        const auto own = local.evaluate_basic(profile, Aggregation::sof);
        double own_theta = 0.0;
        for (std::size_t gi : local.matched_groups(profile)) own_theta += local.stereotypes()[gi].transaction_count;
        p[2] = detail::expected(own);

        // Listed providers, best first.
        const StereotypeRequest req{trustor, profile, cfg.sson_k};
        std::vector<StereotypeResponse> responses = request_stereotypes(list, req, lookup);
        responses.erase(std::remove_if(responses.begin(), responses.end(),
                                       [&](const StereotypeResponse& r) { return r.provider == target; }),
                        responses.end());
        std::vector<ProviderScore> scores;
        for (const auto& r : responses) scores.push_back(*list.find(r.provider));
        if (own && own_theta >= static_cast<double>(m_min)) {
          p[0] = own->expected;
        } else {
          p[0] = detail::expected(combine_external(responses, scores, Aggregation::sof));
          if (!p[0]) p[0] = p[2];
        }

        // K random responders, weighted by scores learned the same way.
        std::vector<AgentId> pool = others;
        detail::shuffle(pool, rng);
        std::vector<StereotypeResponse> rnd;
        for (AgentId a : pool) {
          if (rnd.size() >= cfg.sson_k) break;
          if (a == target) continue;
          auto r = providers[a].respond(req);
          if (!r.stereotypes.empty()) rnd.push_back(std::move(r));
        }
        std::vector<ProviderScore> rnd_scores;
        for (const auto& r : rnd) rnd_scores.push_back(*rnd_list.find(r.provider));
        if (own && own_theta >= static_cast<double>(m_min)) {
          p[1] = own->expected;
        } else {
          p[1] = detail::expected(combine_external(rnd, rnd_scores, Aggregation::sof));
          if (!p[1]) p[1] = p[2];
        }

        for (std::size_t ai = 0; ai < arms.size(); ++ai) {
          acc[rep][ai].add(p[ai], truth, honest);
          preds[rep].push_back({rep, trustor, target, honest, arms[ai], p[ai], truth});
        }

        // The trustor consumes one of the target's reviews and judges it.
        const auto& written = w.reviews_by(target);
        if (written.empty()) continue;
        const Review& rv = w.reviews()[written[uniform_index(rng, written.size())]];
        const bool observed = rv.true_quality > 0.5;
        for (const auto& r : responses) {
          if (auto view = provider_view(r, Aggregation::sof)) {
            list.record_recommendation_outcome(r.provider, view->expected >= 0.5, observed);
          }
        }
        for (const auto& r : rnd) {
          if (auto view = provider_view(r, Aggregation::sof)) {
            rnd_list.record_recommendation_outcome(r.provider, view->expected >= 0.5, observed);
          }
        }
      }
    }
  });

  ExperimentReport report = detail::new_report("sson", cfg);
  for (std::size_t ai = 0; ai < arms.size(); ++ai) {
    std::vector<detail::Accum> per_rep;
    for (std::size_t r = 0; r < cfg.repetitions; ++r) per_rep.push_back(acc[r][ai]);
    report.models.push_back(detail::summarize(arms[ai], per_rep));
  }
  const double with = report.models[0].mae_all;
  const double rnd = report.models[1].mae_all;
  if (rnd > 0.0) report.sson_improvement = (rnd - with) / rnd;
  for (auto& p : preds) report.predictions.insert(report.predictions.end(), p.begin(), p.end());
  return report;
}

// ---------------------------------------------------------------------------
// Output

namespace detail {

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

inline nlohmann::ordered_json num_json(double v) {
  return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v);
}

inline void provenance_header(std::ostream& out, const ExperimentReport& r) {
  out << "# stereotrust " << r.kind << '\n';
  out << "# config_hash=" << r.config_hash << '\n';
  out << "# seed=" << r.seed << '\n';
}

}  // namespace detail

/// One row per model x metric (and strategy x metric).
inline void write_report_csv(const ExperimentReport& r, std::ostream& out) {
  detail::provenance_header(out, r);
  out << "section,name,metric,value\n";
  for (const auto& m : r.models) {
    const std::pair<const char*, double> rows[] = {
        {"mae_all", m.mae_all},     {"mae_honest", m.mae_honest}, {"mae_dishonest", m.mae_dishonest},
        {"ci_low", m.ci_low},       {"ci_high", m.ci_high},       {"coverage", m.coverage},
        {"pairs", static_cast<double>(m.pairs)}};
    for (const auto& [k, v] : rows) out << "model," << m.name << ',' << k << ',' << detail::num(v) << '\n';
  }
  for (const auto& s : r.strategies) {
    const std::pair<const char*, double> rows[] = {{"mae", s.mae},
                                                   {"rebuilds", s.rebuilds},
                                                   {"transactions", s.transactions},
                                                   {"normalized_cost", s.normalized_cost}};
    for (const auto& [k, v] : rows) out << "strategy," << s.name << ',' << k << ',' << detail::num(v) << '\n';
  }
  if (r.sson_improvement) out << "sson,sson,improvement_over_random," << detail::num(*r.sson_improvement) << '\n';
}

inline nlohmann::ordered_json report_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = r.kind;
  j["config_hash"] = r.config_hash;
  j["seed"] = r.seed;
  j["config"] = r.config;
  auto models = nlohmann::ordered_json::array();
  for (const auto& m : r.models) {
    auto reps = nlohmann::ordered_json::array();
    for (double v : m.rep_mae) reps.push_back(v);
    models.push_back({{"name", m.name},
                      {"mae_all", detail::num_json(m.mae_all)},
                      {"mae_honest", detail::num_json(m.mae_honest)},
                      {"mae_dishonest", detail::num_json(m.mae_dishonest)},
                      {"ci95", {detail::num_json(m.ci_low), detail::num_json(m.ci_high)}},
                      {"coverage", m.coverage},
                      {"pairs", m.pairs},
                      {"covered", m.covered},
                      {"rep_mae", reps}});
  }
  j["models"] = models;
  auto strategies = nlohmann::ordered_json::array();
  for (const auto& s : r.strategies) {
    strategies.push_back({{"name", s.name},
                          {"mae", detail::num_json(s.mae)},
                          {"rebuilds", s.rebuilds},
                          {"transactions", s.transactions},
                          {"normalized_cost", s.normalized_cost}});
  }
  j["strategies"] = strategies;
  j["sson_improvement"] = r.sson_improvement ? nlohmann::ordered_json(*r.sson_improvement) : nlohmann::ordered_json(nullptr);
  return j;
}

inline void write_report_json(const ExperimentReport& r, std::ostream& out) {
  out << report_json(r).dump(2) << '\n';
}

/// Long format: one row per (rep, trustor, target, model).
inline void write_predictions_csv(const ExperimentReport& r, std::ostream& out) {
  detail::provenance_header(out, r);
  out << "rep,trustor,target,target_honest,model,prediction,truth,abs_error\n";
  for (const auto& p : r.predictions) {
    out << p.rep << ',' << p.trustor << ',' << p.target << ',' << (p.target_honest ? 1 : 0) << ',' << p.model
        << ',';
    if (p.value) {
      out << detail::num(*p.value) << ',' << detail::num(p.truth) << ',' << detail::num(std::abs(*p.value - p.truth));
    } else {
      out << ',' << detail::num(p.truth) << ',';
    }
    out << '\n';
  }
}

}  // namespace stereotrust
