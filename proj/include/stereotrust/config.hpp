#pragma once

// Experiment configuration and its flat `key = value` file format.

#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stereotrust/stats.hpp"
#include "stereotrust/world.hpp"

namespace stereotrust {

enum class Model {
  d_stereotrust_sof,
  d_stereotrust_sop,
  stereotrust_sof,
  stereotrust_sop,
  dichotomy_only_sof,
  dichotomy_only_sop,
  group_feedback,
  feedback,
  eigentrust,
  transitive_sp,
  transitive_mrp,
  // Harness self-checks.
  oracle,
  constant,
};

inline constexpr std::array<std::pair<Model, const char*>, 13> kModelNames{{
    {Model::d_stereotrust_sof, "d-stereotrust-sof"},
    {Model::d_stereotrust_sop, "d-stereotrust-sop"},
    {Model::stereotrust_sof, "stereotrust-sof"},
    {Model::stereotrust_sop, "stereotrust-sop"},
    {Model::dichotomy_only_sof, "dichotomy-only-sof"},
    {Model::dichotomy_only_sop, "dichotomy-only-sop"},
    {Model::group_feedback, "group-feedback"},
    {Model::feedback, "feedback"},
    {Model::eigentrust, "eigentrust"},
    {Model::transitive_sp, "transitive-sp"},
    {Model::transitive_mrp, "transitive-mrp"},
    {Model::oracle, "oracle"},
    {Model::constant, "constant"},
}};

inline const char* to_string(Model m) {
  for (const auto& [k, v] : kModelNames) {
    if (k == m) return v;
  }
  return "?";
}

inline Model model_from_string(const std::string& s) {
  for (const auto& [k, v] : kModelNames) {
    if (s == v) return k;
  }
  throw ConfigError("unknown model '" + s + "'");
}

/// The comparison set of the synthetic benchmark table.
inline std::vector<Model> default_models() {
  return {Model::d_stereotrust_sof, Model::d_stereotrust_sop, Model::stereotrust_sof,
          Model::stereotrust_sop,   Model::dichotomy_only_sof, Model::dichotomy_only_sop,
          Model::group_feedback,    Model::feedback,           Model::eigentrust,
          Model::transitive_sp,     Model::transitive_mrp};
}

inline std::vector<Model> parse_models(const std::string& list) {
  std::vector<Model> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(model_from_string(item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ConfigError("model list is empty");
  return out;
}

struct ExperimentConfig {
  WorldConfig world;
  /// When set, every repetition evaluates this ingested dataset instead of a
  /// freshly generated world.
  std::optional<std::string> dataset;
  std::size_t min_ratings = 50;

  std::size_t repetitions = 10;
  /// Repetition r uses world seed `seed + r`.
  std::uint64_t seed = 1;
  std::size_t trustors = 1;
  std::vector<AgentId> trustor_ids;
  /// 0 evaluates every other agent with ground truth.
  std::size_t targets = 0;
  std::vector<Model> models = default_models();
  /// Matched groups kept per target (0 disables the cut).
  std::size_t top_k_features = 3;
  TieRule tie = TieRule::honest;
  std::size_t max_reporters = 0;
  bool ask_strangers = true;
  TruthBasis truth = TruthBasis::quality;
  GroupScope group_scope = GroupScope::history;

  std::size_t pretrusted = 5;
  double eigen_damping = 0.5;
  double eigen_epsilon = 1e-4;
  std::size_t mrp_max_hops = 6;

  // Update strategies.
  std::size_t tau = 10;
  double strategy_behavior_change = 0.1;

  // Stereotype sharing.
  std::size_t sson_k = 5;
  std::size_t sson_trustors = 10;
  std::size_t sson_max_local = 4;
  std::size_t sson_list_size = 20;
  double sson_epsilon = 0.1;
  double sson_confidence = 0.95;

  std::size_t jobs = 1;

  void validate() const {
    world.validate();
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    if (tau < 1) throw ConfigError("tau must be positive");
    if (sson_k < 1) throw ConfigError("sson_k must be positive");
    if (eigen_damping < 0.0 || eigen_damping > 1.0) throw ConfigError("eigen_damping must lie in [0,1]");
    if (!(sson_epsilon > 0.0 && sson_epsilon < 1.0) || !(sson_confidence > 0.0 && sson_confidence < 1.0)) {
      throw ConfigError("sson_epsilon and sson_confidence must lie in (0,1)");
    }
    if (models.empty()) throw ConfigError("no models selected");
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["world"] = world.to_json();
    j["dataset"] = dataset ? nlohmann::ordered_json(*dataset) : nlohmann::ordered_json(nullptr);
    j["min_ratings"] = min_ratings;
    j["repetitions"] = repetitions;
    j["seed"] = seed;
    j["trustors"] = trustors;
    j["trustor_ids"] = trustor_ids;
    j["targets"] = targets;
    auto ms = nlohmann::ordered_json::array();
    for (Model m : models) ms.push_back(to_string(m));
    j["models"] = ms;
    j["top_k_features"] = top_k_features;
    j["tie"] = tie == TieRule::honest ? "honest" : "dishonest";
    j["max_reporters"] = max_reporters;
    j["ask_strangers"] = ask_strangers;
    j["ground_truth"] = to_string(truth);
    j["group_scope"] = group_scope == GroupScope::history ? "history" : "partners";
    j["pretrusted"] = pretrusted;
    j["eigen_damping"] = eigen_damping;
    j["eigen_epsilon"] = eigen_epsilon;
    j["mrp_max_hops"] = mrp_max_hops;
    j["tau"] = tau;
    j["strategy_behavior_change"] = strategy_behavior_change;
    j["sson_k"] = sson_k;
    j["sson_trustors"] = sson_trustors;
    j["sson_max_local"] = sson_max_local;
    j["sson_list_size"] = sson_list_size;
    j["sson_epsilon"] = sson_epsilon;
    j["sson_confidence"] = sson_confidence;
    return j;
  }

  /// Stable hash of every setting that affects results (`jobs` excluded).
  std::string hash() const {
    std::ostringstream os;
    os << std::hex << fnv1a(to_json().dump());
    return os.str();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  T out{};
  is >> out;
  if (is.fail() || !is.eof()) throw ConfigError("bad value for '" + key + "': '" + v + "'");
  return out;
}

inline std::vector<AgentId> parse_ids(const std::string& key, const std::string& v) {
  std::vector<AgentId> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number<AgentId>(key, item));
  }
  return out;
}

}  // namespace detail

/// Applies one `key = value` setting. Unknown keys are rejected.
inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& v) {
  using detail::parse_number;
  using Setter = std::function<void(const std::string&)>;
  auto sz = [&](std::size_t& f) -> Setter { return [&f, key](const std::string& s) { f = parse_number<std::size_t>(key, s); }; };
  auto dbl = [&](double& f) -> Setter { return [&f, key](const std::string& s) { f = parse_number<double>(key, s); }; };
  auto i32 = [&](int& f) -> Setter { return [&f, key](const std::string& s) { f = parse_number<int>(key, s); }; };
  const std::map<std::string, Setter> table{
      {"n_agents", i32(c.world.n_agents)},
      {"dishonest_fraction", dbl(c.world.dishonest_fraction)},
      {"p_m", dbl(c.world.p_m)},
      {"n_categories", i32(c.world.n_categories)},
      {"products_per_category", i32(c.world.products_per_category)},
      {"reviews_mu", dbl(c.world.reviews_mu)},
      {"reviews_sigma", dbl(c.world.reviews_sigma)},
      {"ratings_mu", dbl(c.world.ratings_mu)},
      {"ratings_sigma", dbl(c.world.ratings_sigma)},
      {"category_bias_own", dbl(c.world.category_bias[0])},
      {"category_bias_shared", dbl(c.world.category_bias[1])},
      {"category_bias_other", dbl(c.world.category_bias[2])},
      {"behavior_change", dbl(c.world.behavior_change)},
      {"report_model", [&c](const std::string& s) { c.world.report_model = report_model_from_string(s); }},
      {"dataset", [&c](const std::string& s) { c.dataset = s; }},
      {"min_ratings", sz(c.min_ratings)},
      {"repetitions", sz(c.repetitions)},
      {"seed", [&c, key](const std::string& s) { c.seed = parse_number<std::uint64_t>(key, s); }},
      {"trustors", sz(c.trustors)},
      {"trustor_ids", [&c, key](const std::string& s) { c.trustor_ids = detail::parse_ids(key, s); }},
      {"targets", sz(c.targets)},
      {"models", [&c](const std::string& s) { c.models = parse_models(s); }},
      {"top_k_features", sz(c.top_k_features)},
      {"tie", [&c](const std::string& s) {
         if (s == "honest") c.tie = TieRule::honest;
         else if (s == "dishonest") c.tie = TieRule::dishonest;
         else throw ConfigError("tie must be honest or dishonest");
       }},
      {"max_reporters", sz(c.max_reporters)},
      {"ground_truth", [&c](const std::string& s) { c.truth = truth_basis_from_string(s); }},
      {"group_scope", [&c](const std::string& s) {
         if (s == "history") c.group_scope = GroupScope::history;
         else if (s == "partners") c.group_scope = GroupScope::partners;
         else throw ConfigError("group_scope must be history or partners");
       }},
      {"ask_strangers", [&c, key](const std::string& s) {
         if (s == "true" || s == "1") c.ask_strangers = true;
         else if (s == "false" || s == "0") c.ask_strangers = false;
         else throw ConfigError("bad value for '" + key + "': '" + s + "'");
       }},
      {"pretrusted", sz(c.pretrusted)},
      {"eigen_damping", dbl(c.eigen_damping)},
      {"eigen_epsilon", dbl(c.eigen_epsilon)},
      {"mrp_max_hops", sz(c.mrp_max_hops)},
      {"tau", sz(c.tau)},
      {"strategy_behavior_change", dbl(c.strategy_behavior_change)},
      {"sson_k", sz(c.sson_k)},
      {"sson_trustors", sz(c.sson_trustors)},
      {"sson_max_local", sz(c.sson_max_local)},
      {"sson_list_size", sz(c.sson_list_size)},
      {"sson_epsilon", dbl(c.sson_epsilon)},
      {"sson_confidence", dbl(c.sson_confidence)},
      {"jobs", sz(c.jobs)},
  };
  auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(v);
}

/// Parses `key = value` lines; `#` starts a comment.
inline ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {}) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      apply_setting(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace stereotrust
