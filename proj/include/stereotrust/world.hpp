#pragma once

// Agent society: synthetic review/rating generator, JSONL dataset ingestion,
// world dumps, ground truth, and the opinion queries answered by agents.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stereotrust/dichotomy.hpp"
#include "stereotrust/rng.hpp"
#include "stereotrust/stereotype.hpp"

namespace stereotrust {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data; carries the 1-based line number.
class DataError : public std::runtime_error {
 public:
  DataError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// How agents answer third-party queries (opinions, shared stereotypes).
enum class ReportModel {
  /// Reports are the agent's recorded experience. Dishonest agents already
  /// lie when they rate, so their record is the falsified one.
  recorded,
  /// Dishonest agents additionally mirror what they report (1 - m, or (u, s))
  /// with probability p_m; honest agents do so with probability 1 - p_m.
  mirror,
};

inline const char* to_string(ReportModel m) { return m == ReportModel::recorded ? "recorded" : "mirror"; }

inline ReportModel report_model_from_string(const std::string& s) {
  if (s == "recorded") return ReportModel::recorded;
  if (s == "mirror") return ReportModel::mirror;
  throw ConfigError("unknown report model '" + s + "'");
}

struct WorldConfig {
  int n_agents = 200;
  double dishonest_fraction = 0.4;
  double p_m = 0.9;
  int n_categories = 12;
  int products_per_category = 20;
  double reviews_mu = 10.0;
  double reviews_sigma = 4.0;
  double ratings_mu = 10.0;
  double ratings_sigma = 4.0;
  /// Probability of writing in the agent's own block, the shared block and
  /// the opposite block. Renormalized to sum to one.
  std::array<double, 3> category_bias{0.7, 0.21, 0.03};
  /// Per authored review, probability that the author flips its quality class.
  double behavior_change = 0.0;
  ReportModel report_model = ReportModel::recorded;
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (n_agents < 2) throw ConfigError("n_agents must be at least 2");
    if (n_categories < 3) throw ConfigError("n_categories must be at least 3");
    if (products_per_category < 1) throw ConfigError("products_per_category must be positive");
    auto prob = [](double p, const char* name) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0,1]");
    };
    prob(dishonest_fraction, "dishonest_fraction");
    prob(p_m, "p_m");
    prob(behavior_change, "behavior_change");
    double sum = 0.0;
    for (double b : category_bias) {
      prob(b, "category_bias");
      sum += b;
    }
    if (sum <= 0.0) throw ConfigError("category_bias must have positive mass");
    if (reviews_sigma < 0.0 || ratings_sigma < 0.0) throw ConfigError("sigma must be non-negative");
  }

  nlohmann::ordered_json to_json() const {
    return {{"n_agents", n_agents},
            {"dishonest_fraction", dishonest_fraction},
            {"p_m", p_m},
            {"n_categories", n_categories},
            {"products_per_category", products_per_category},
            {"reviews_mu", reviews_mu},
            {"reviews_sigma", reviews_sigma},
            {"ratings_mu", ratings_mu},
            {"ratings_sigma", ratings_sigma},
            {"category_bias", category_bias},
            {"behavior_change", behavior_change},
            {"report_model", to_string(report_model)},
            {"rng_seed", rng_seed}};
  }

  static WorldConfig from_json(const nlohmann::json& j) {
    WorldConfig c;
    c.n_agents = j.at("n_agents").get<int>();
    c.dishonest_fraction = j.at("dishonest_fraction").get<double>();
    c.p_m = j.at("p_m").get<double>();
    c.n_categories = j.at("n_categories").get<int>();
    c.products_per_category = j.at("products_per_category").get<int>();
    c.reviews_mu = j.at("reviews_mu").get<double>();
    c.reviews_sigma = j.at("reviews_sigma").get<double>();
    c.ratings_mu = j.at("ratings_mu").get<double>();
    c.ratings_sigma = j.at("ratings_sigma").get<double>();
    c.category_bias = j.at("category_bias").get<std::array<double, 3>>();
    c.behavior_change = j.at("behavior_change").get<double>();
    c.report_model = report_model_from_string(j.at("report_model").get<std::string>());
    c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    return c;
  }
};

struct Review {
  std::uint32_t id = 0;
  AgentId author = 0;
  std::uint32_t product = 0;
  FeatureValue category = 0;
  double true_quality = 0.0;
};

/// One rating event: `rater` consumed `review` and reported `value`.
struct Rating {
  AgentId rater = 0;
  std::uint32_t review = 0;
  double value = 0.0;
  /// Value used for ground truth: the review's designed quality for
  /// synthetic worlds, the observed rating for ingested data.
  double truth = 0.0;
  bool outcome = false;
  std::uint64_t seq = 0;
};

using GroundTruth = std::map<AgentId, double>;

/// Immutable once built. All queries are const and safe to share across
/// evaluator threads.
class World {
 public:
  World() = default;

  World(WorldConfig config, std::vector<std::string> agent_names, std::vector<bool> honest,
        std::vector<std::string> categories, std::vector<Review> reviews, std::vector<Rating> ratings)
      : config_(std::move(config)),
        names_(std::move(agent_names)),
        honest_(std::move(honest)),
        categories_(std::move(categories)),
        reviews_(std::move(reviews)),
        ratings_(std::move(ratings)) {
    index();
  }

  const WorldConfig& config() const noexcept { return config_; }
  std::size_t agent_count() const noexcept { return names_.size(); }
  std::size_t category_count() const noexcept { return categories_.size(); }
  const std::string& name(AgentId a) const { return names_.at(a); }
  const std::vector<std::string>& category_names() const noexcept { return categories_; }
  bool is_honest(AgentId a) const { return honest_.at(a); }
  const std::vector<Review>& reviews() const noexcept { return reviews_; }
  const std::vector<Rating>& ratings() const noexcept { return ratings_; }
  const ProfileTable& profiles() const noexcept { return profiles_; }
  const std::vector<std::uint32_t>& reviews_by(AgentId a) const { return reviews_by_.at(a); }

  bool interested(AgentId a, FeatureValue category) const {
    return profiles_.at(a)[static_cast<std::size_t>(category)] == 1;
  }

  TransactionRecord transaction(const Rating& r) const {
    const Review& rv = reviews_[r.review];
    return {r.rater, rv.author, rv.category, r.outcome, r.value, r.seq};
  }

  /// The rater's transactions, in sequence order.
  std::vector<TransactionRecord> history_of(AgentId rater) const {
    std::vector<TransactionRecord> out;
    for (std::size_t i : by_rater_.at(rater)) out.push_back(transaction(ratings_[i]));
    return out;
  }

  /// Outcome counts of `rater`'s transactions with `author`.
  std::optional<OutcomeCounts> counts(AgentId rater, AgentId author) const {
    const auto& m = pair_counts_.at(rater);
    auto it = m.find(author);
    if (it == m.end()) return std::nullopt;
    return it->second;
  }

  const std::unordered_map<AgentId, OutcomeCounts>& out_counts(AgentId rater) const {
    return pair_counts_.at(rater);
  }

  /// Raters of `author`'s reviews, sorted by id.
  const std::vector<AgentId>& raters_of(AgentId author) const { return raters_of_.at(author); }

  /// Whether `agent` lies in a given report. Deterministic per
  /// (seed, agent, subject, channel) so repeated queries agree.
  bool lies(AgentId agent, std::uint64_t subject, std::uint64_t channel) const {
    if (config_.report_model == ReportModel::recorded) return false;
    const std::uint64_t h =
        mix_seed(mix_seed(config_.rng_seed, agent), (subject << 8) ^ channel ^ 0xA5A5u);
    const double p_lie = honest_.at(agent) ? 1.0 - config_.p_m : config_.p_m;
    return unit_from_hash(h) < p_lie;
  }

  /// m_{k,y}: fraction of the reporter's transactions with `about` that
  /// succeeded, as the reporter chooses to report it.
  std::optional<double> report(AgentId reporter, AgentId about) const {
    auto c = counts(reporter, about);
    if (!c || c->total() <= 0.0) return std::nullopt;
    const double m = fraction_successful(*c);
    return lies(reporter, about, 1) ? 1.0 - m : m;
  }

 private:
  void index() {
    const std::size_t n = names_.size();
    const std::size_t width = categories_.size();
    profiles_.assign(n, FeatureVector(width, 0));
    reviews_by_.assign(n, {});
    by_rater_.assign(n, {});
    pair_counts_.assign(n, {});
    raters_of_.assign(n, {});
    for (const auto& r : reviews_) {
      reviews_by_.at(r.author).push_back(r.id);
      profiles_[r.author].set(static_cast<std::size_t>(r.category), 1);
    }
    std::vector<std::size_t> order(ratings_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ratings_[a].seq < ratings_[b].seq; });
    for (std::size_t i : order) {
      const Rating& r = ratings_[i];
      const Review& rv = reviews_.at(r.review);
      by_rater_.at(r.rater).push_back(i);
      pair_counts_[r.rater][rv.author].record(r.outcome);
      raters_of_[rv.author].push_back(r.rater);
      profiles_[r.rater].set(static_cast<std::size_t>(rv.category), 1);
    }
    for (auto& v : raters_of_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }

  WorldConfig config_;
  std::vector<std::string> names_;
  std::vector<bool> honest_;
  std::vector<std::string> categories_;
  std::vector<Review> reviews_;
  std::vector<Rating> ratings_;

  ProfileTable profiles_;
  std::vector<std::vector<std::uint32_t>> reviews_by_;
  std::vector<std::vector<std::size_t>> by_rater_;
  std::vector<std::unordered_map<AgentId, OutcomeCounts>> pair_counts_;
  std::vector<std::vector<AgentId>> raters_of_;
};

/// Adapter exposing a World to the dichotomy module.
class WorldOpinions final : public OpinionSource {
 public:
  explicit WorldOpinions(const World& w) : world_(&w) {}
  std::size_t agent_count() const override { return world_->agent_count(); }
  const FeatureVector& profile(AgentId a) const override { return world_->profiles().at(a); }
  std::optional<double> report(AgentId reporter, AgentId about) const override {
    return world_->report(reporter, about);
  }

 private:
  const World* world_;
};

namespace detail {

/// Category block boundaries: [0, b1) honest block, [b1, b2) dishonest
/// block, [b2, n) shared block.
inline std::array<int, 2> block_bounds(int n_categories) {
  const int third = n_categories / 3;
  return {third, 2 * third};
}

inline FeatureValue draw_category(Rng& rng, bool honest, const WorldConfig& cfg) {
  const auto [b1, b2] = block_bounds(cfg.n_categories);
  const double own = cfg.category_bias[0];
  const double shared = cfg.category_bias[1];
  const double other = cfg.category_bias[2];
  const double u = uniform01(rng) * (own + shared + other);
  int lo = 0;
  int hi = 0;
  const int honest_lo = 0, honest_hi = b1, dishonest_lo = b1, dishonest_hi = b2;
  if (u < own) {
    lo = honest ? honest_lo : dishonest_lo;
    hi = honest ? honest_hi : dishonest_hi;
  } else if (u < own + shared) {
    lo = b2;
    hi = cfg.n_categories;
  } else {
    lo = honest ? dishonest_lo : honest_lo;
    hi = honest ? dishonest_hi : honest_hi;
  }
  return static_cast<FeatureValue>(lo + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(hi - lo))));
}

inline double draw_quality(Rng& rng, bool high) {
  static constexpr std::array<double, 3> kLow{0.0, 0.2, 0.4};
  static constexpr std::array<double, 3> kHigh{0.6, 0.8, 1.0};
  const auto i = uniform_index(rng, 3);
  return high ? kHigh[i] : kLow[i];
}

}  // namespace detail

/// Synthetic hostile review community. Deterministic under `cfg.rng_seed`.
inline World generate_world(const WorldConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.rng_seed);
  const auto n = static_cast<std::size_t>(cfg.n_agents);

  std::vector<bool> honest(n, true);
  {
    const auto n_dishonest = static_cast<std::size_t>(std::lround(cfg.dishonest_fraction * static_cast<double>(n)));
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(ids[i], ids[uniform_index(rng, i + 1)]);
    for (std::size_t i = 0; i < n_dishonest; ++i) honest[ids[i]] = false;
  }

  std::vector<Review> reviews;
  std::vector<std::vector<AgentId>> interested(static_cast<std::size_t>(cfg.n_categories));
  for (AgentId a = 0; a < n; ++a) {
    const int count = positive_count(rng, cfg.reviews_mu, cfg.reviews_sigma);
    for (int k = 0; k < count; ++k) {
      Review r;
      r.id = static_cast<std::uint32_t>(reviews.size());
      r.author = a;
      r.category = detail::draw_category(rng, honest[a], cfg);
      r.product = static_cast<std::uint32_t>(r.category * cfg.products_per_category) +
                  static_cast<std::uint32_t>(uniform_index(rng, static_cast<std::size_t>(cfg.products_per_category)));
      bool high = bernoulli(rng, cfg.p_m) ? honest[a] : !honest[a];
      if (cfg.behavior_change > 0.0 && bernoulli(rng, cfg.behavior_change)) high = !high;
      r.true_quality = detail::draw_quality(rng, high);
      auto& pool = interested[static_cast<std::size_t>(r.category)];
      if (std::find(pool.begin(), pool.end(), a) == pool.end()) pool.push_back(a);
      reviews.push_back(r);
    }
  }
  for (auto& pool : interested) std::sort(pool.begin(), pool.end());

  std::vector<Rating> ratings;
  std::vector<AgentId> eligible;
  for (const Review& rv : reviews) {
    eligible.clear();
    for (AgentId a : interested[static_cast<std::size_t>(rv.category)]) {
      if (a != rv.author) eligible.push_back(a);
    }
    const auto want = static_cast<std::size_t>(positive_count(rng, cfg.ratings_mu, cfg.ratings_sigma));
    const std::size_t take = std::min(want, eligible.size());
    // Partial Fisher-Yates: the first `take` entries are a uniform sample.
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(eligible[i], eligible[i + uniform_index(rng, eligible.size() - i)]);
      const AgentId rater = eligible[i];
      const bool truthful = bernoulli(rng, cfg.p_m) ? honest[rater] : !honest[rater];
      Rating r;
      r.rater = rater;
      r.review = rv.id;
      r.value = truthful ? rv.true_quality : 1.0 - rv.true_quality;
      r.truth = rv.true_quality;
      r.outcome = r.value > 0.5;
      ratings.push_back(r);
    }
  }
  // Interleave rating events into one timeline.
  for (std::size_t i = ratings.size(); i > 1; --i) std::swap(ratings[i - 1], ratings[uniform_index(rng, i)]);
  for (std::size_t i = 0; i < ratings.size(); ++i) ratings[i].seq = i;

  std::vector<std::string> names(n);
  for (AgentId a = 0; a < n; ++a) names[a] = "a" + std::to_string(a);
  std::vector<std::string> cats(static_cast<std::size_t>(cfg.n_categories));
  for (int c = 0; c < cfg.n_categories; ++c) cats[static_cast<std::size_t>(c)] = "c" + std::to_string(c + 1);
  return World(cfg, std::move(names), std::move(honest), std::move(cats), std::move(reviews), std::move(ratings));
}

enum class TruthBasis {
  /// Mean of the rating values an agent's reviews received.
  ratings,
  /// Rating-weighted mean of the designed review quality (synthetic worlds).
  quality,
};

inline const char* to_string(TruthBasis b) { return b == TruthBasis::ratings ? "ratings" : "quality"; }

inline TruthBasis truth_basis_from_string(const std::string& s) {
  if (s == "ratings") return TruthBasis::ratings;
  if (s == "quality") return TruthBasis::quality;
  throw ConfigError("unknown ground truth basis '" + s + "'");
}

/// Per-agent mean over every rating its reviews received. Agents whose
/// reviews were never rated are absent.
inline GroundTruth ground_truth(const World& w, TruthBasis basis = TruthBasis::ratings) {
  std::vector<double> sum(w.agent_count(), 0.0);
  std::vector<std::size_t> n(w.agent_count(), 0);
  for (const Rating& r : w.ratings()) {
    const AgentId a = w.reviews()[r.review].author;
    sum[a] += basis == TruthBasis::ratings ? r.value : r.truth;
    ++n[a];
  }
  GroundTruth gt;
  for (AgentId a = 0; a < w.agent_count(); ++a) {
    if (n[a] > 0) gt[a] = sum[a] / static_cast<double>(n[a]);
  }
  return gt;
}

// ---------------------------------------------------------------------------
// JSONL ingestion and world dumps

struct IngestConfig {
  std::map<std::string, double> labels{{"Off Topic", 0.0},     {"Not Helpful", 0.2},
                                       {"Somewhat Helpful", 0.4}, {"Helpful", 0.6},
                                       {"Very Helpful", 0.8},  {"Most Helpful", 1.0}};
  double success_threshold = 0.8;
  std::size_t min_ratings = 50;
};

namespace detail {

struct RawRating {
  std::string rater, author, review, category;
  double value = 0.0;
  std::optional<double> truth;
  std::uint64_t seq = 0;
};

inline RawRating parse_rating_line(const std::string& line, std::size_t lineno, const IngestConfig& cfg) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(lineno, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError(lineno, "record is not a JSON object");
  RawRating r;
  try {
    r.rater = j.at("rater").get<std::string>();
    r.author = j.at("author").get<std::string>();
    r.review = j.at("review").get<std::string>();
    r.category = j.at("category").get<std::string>();
    r.seq = j.at("seq").get<std::uint64_t>();
    const auto& v = j.at("label_or_value");
    if (v.is_string()) {
      auto it = cfg.labels.find(v.get<std::string>());
      if (it == cfg.labels.end()) {
        throw DataError(lineno, "unknown rating label '" + v.get<std::string>() + "'");
      }
      r.value = it->second;
    } else if (v.is_number()) {
      r.value = v.get<double>();
      if (!(r.value >= 0.0 && r.value <= 1.0)) throw DataError(lineno, "rating value outside [0,1]");
    } else {
      throw DataError(lineno, "label_or_value must be a string or a number");
    }
    if (j.contains("true_quality")) r.truth = j.at("true_quality").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(lineno, std::string("missing or mistyped field: ") + e.what());
  }
  return r;
}

class Interner {
 public:
  std::uint32_t id(const std::string& key) {
    auto [it, inserted] = ids_.try_emplace(key, static_cast<std::uint32_t>(names_.size()));
    if (inserted) names_.push_back(key);
    return it->second;
  }
  std::vector<std::string>& names() { return names_; }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> names_;
};

}  // namespace detail

/// Builds a World from JSON-lines rating events. Reviews with fewer than
/// `min_ratings` ratings are dropped; an agent counts as honest when its
/// ground truth is at least 0.5 (real data carries no behavior label).
inline World ingest_dataset(std::istream& in, const IngestConfig& cfg = {}) {
  std::vector<detail::RawRating> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    raw.push_back(detail::parse_rating_line(line, lineno, cfg));
  }
  std::unordered_map<std::string, std::size_t> per_review;
  for (const auto& r : raw) ++per_review[r.review];

  detail::Interner agents, cats, revs;
  std::vector<Review> reviews;
  std::vector<Rating> ratings;
  for (const auto& r : raw) {
    if (per_review[r.review] < cfg.min_ratings) continue;
    const AgentId author = agents.id(r.author);
    const AgentId rater = agents.id(r.rater);
    const auto cat = static_cast<FeatureValue>(cats.id(r.category));
    const std::uint32_t rid = revs.id(r.review);
    if (rid == reviews.size()) {
      reviews.push_back({rid, author, rid, cat, r.truth.value_or(0.0)});
    }
    Rating rt;
    rt.rater = rater;
    rt.review = rid;
    rt.value = r.value;
    rt.truth = r.truth.value_or(r.value);
    rt.outcome = r.value >= cfg.success_threshold;
    rt.seq = r.seq;
    ratings.push_back(rt);
  }
  std::vector<std::string> names = std::move(agents.names());
  std::vector<bool> honest(names.size(), true);
  World tmp(WorldConfig{}, names, honest, cats.names(), reviews, ratings);
  for (const auto& [a, v] : ground_truth(tmp)) honest[a] = v >= 0.5;
  WorldConfig wc;
  wc.n_agents = static_cast<int>(names.size());
  wc.n_categories = static_cast<int>(cats.names().size());
  return World(wc, std::move(names), std::move(honest), std::move(cats.names()), std::move(reviews),
               std::move(ratings));
}

inline World ingest_dataset_file(const std::string& path, const IngestConfig& cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset '" + path + "'");
  return ingest_dataset(in, cfg);
}

/// Header line plus one JSON object per rating event, ordered by sequence.
inline void dump_world(const World& w, std::ostream& out, const nlohmann::ordered_json& provenance = {}) {
  nlohmann::ordered_json header;
  header["format"] = "stereotrust-world";
  header["version"] = 1;
  if (!provenance.is_null()) header["provenance"] = provenance;
  header["config"] = w.config().to_json();
  header["seed"] = w.config().rng_seed;
  auto agents = nlohmann::ordered_json::array();
  for (AgentId a = 0; a < w.agent_count(); ++a) {
    agents.push_back({{"id", w.name(a)}, {"honest", w.is_honest(a)}});
  }
  header["agents"] = agents;
  header["categories"] = w.category_names();
  auto reviews = nlohmann::ordered_json::array();
  for (const auto& r : w.reviews()) {
    reviews.push_back({{"review", "r" + std::to_string(r.id)},
                       {"author", w.name(r.author)},
                       {"category", w.category_names()[static_cast<std::size_t>(r.category)]},
                       {"product", r.product},
                       {"true_quality", r.true_quality}});
  }
  header["reviews"] = reviews;
  out << header.dump() << '\n';

  std::vector<const Rating*> order;
  for (const auto& r : w.ratings()) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const Rating* a, const Rating* b) { return a->seq < b->seq; });
  for (const Rating* r : order) {
    const Review& rv = w.reviews()[r->review];
    nlohmann::ordered_json j;
    j["rater"] = w.name(r->rater);
    j["author"] = w.name(rv.author);
    j["review"] = "r" + std::to_string(rv.id);
    j["category"] = w.category_names()[static_cast<std::size_t>(rv.category)];
    j["label_or_value"] = r->value;
    j["seq"] = r->seq;
    j["true_quality"] = r->truth;
    j["outcome"] = r->outcome;
    out << j.dump() << '\n';
  }
}

inline std::string dump_world_string(const World& w, const nlohmann::ordered_json& provenance = {}) {
  std::ostringstream os;
  dump_world(w, os, provenance);
  return os.str();
}

/// Inverse of dump_world.
inline World load_world(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(1, "empty world dump");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
    if (header.value("format", "") != "stereotrust-world") throw DataError(1, "not a world dump header");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(1, std::string("bad header: ") + e.what());
  }
  WorldConfig cfg;
  std::vector<std::string> names;
  std::vector<bool> honest;
  std::vector<std::string> cats;
  std::vector<Review> reviews;
  std::unordered_map<std::string, AgentId> agent_ids;
  std::unordered_map<std::string, FeatureValue> cat_ids;
  std::unordered_map<std::string, std::uint32_t> review_ids;
  try {
    cfg = WorldConfig::from_json(header.at("config"));
    for (const auto& a : header.at("agents")) {
      agent_ids[a.at("id").get<std::string>()] = static_cast<AgentId>(names.size());
      names.push_back(a.at("id").get<std::string>());
      honest.push_back(a.at("honest").get<bool>());
    }
    for (const auto& c : header.at("categories")) {
      cat_ids[c.get<std::string>()] = static_cast<FeatureValue>(cats.size());
      cats.push_back(c.get<std::string>());
    }
    for (const auto& r : header.at("reviews")) {
      Review rv;
      rv.id = static_cast<std::uint32_t>(reviews.size());
      review_ids[r.at("review").get<std::string>()] = rv.id;
      rv.author = agent_ids.at(r.at("author").get<std::string>());
      rv.category = cat_ids.at(r.at("category").get<std::string>());
      rv.product = r.at("product").get<std::uint32_t>();
      rv.true_quality = r.at("true_quality").get<double>();
      reviews.push_back(rv);
    }
  } catch (const std::exception& e) {
    throw DataError(1, std::string("bad header: ") + e.what());
  }
  std::vector<Rating> ratings;
  std::size_t lineno = 1;
  const double threshold = 0.5;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      Rating r;
      r.rater = agent_ids.at(j.at("rater").get<std::string>());
      r.review = review_ids.at(j.at("review").get<std::string>());
      r.value = j.at("label_or_value").get<double>();
      r.truth = j.at("true_quality").get<double>();
      r.seq = j.at("seq").get<std::uint64_t>();
      r.outcome = j.contains("outcome") ? j.at("outcome").get<bool>() : r.value > threshold;
      ratings.push_back(r);
    } catch (const std::exception& e) {
      throw DataError(lineno, e.what());
    }
  }
  return World(cfg, std::move(names), std::move(honest), std::move(cats), std::move(reviews), std::move(ratings));
}

}  // namespace stereotrust
