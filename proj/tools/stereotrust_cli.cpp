// stereotrust: generate worlds, run experiments, convert datasets.
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 internal error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stereotrust/config.hpp"
#include "stereotrust/harness.hpp"
#include "stereotrust/world.hpp"

namespace fs = std::filesystem;
using namespace stereotrust;

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::optional<std::size_t> jobs;
  std::optional<std::string> models;
  std::optional<std::size_t> tau;
  std::optional<std::size_t> top_k;
  std::optional<std::size_t> sson_k;
  std::string input;
};

ExperimentConfig resolve(const Options& o) {
  ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.seed) {
    cfg.seed = *o.seed;
  } else if (const char* env = std::getenv("STEREOTRUST_SEED"); env && *env) {
    apply_setting(cfg, "seed", env);
  }
  cfg.world.rng_seed = cfg.seed;
  if (o.models) cfg.models = parse_models(*o.models);
  if (o.tau) cfg.tau = *o.tau;
  if (o.top_k) cfg.top_k_features = *o.top_k;
  if (o.sson_k) cfg.sson_k = *o.sson_k;
  cfg.jobs = o.jobs.value_or(0);
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + (dir / name).string() + "'");
  return f;
}

void write_outputs(const ExperimentReport& r, const fs::path& dir, const std::string& prefix) {
  {
    auto f = open_out(dir, prefix + "report.csv");
    write_report_csv(r, f);
  }
  {
    auto f = open_out(dir, prefix + "report.json");
    write_report_json(r, f);
  }
  if (!r.predictions.empty()) {
    auto f = open_out(dir, prefix + "predictions.csv");
    write_predictions_csv(r, f);
  }
}

void print_summary(const ExperimentReport& r) {
  for (const auto& m : r.models) {
    std::cout << m.name << "  MAE_all=" << m.mae_all << " (" << m.ci_low << ", " << m.ci_high
              << ")  honest=" << m.mae_honest << "  dishonest=" << m.mae_dishonest << "  coverage=" << m.coverage
              << '\n';
  }
  for (const auto& s : r.strategies) {
    std::cout << s.name << "  MAE=" << s.mae << "  cost=" << s.normalized_cost << '\n';
  }
  if (r.sson_improvement) std::cout << "improvement over random providers: " << *r.sson_improvement << '\n';
}

nlohmann::ordered_json provenance(const ExperimentConfig& cfg) {
  return {{"config_hash", cfg.hash()}, {"seed", cfg.seed}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"StereoTrust trust engine and agent-society simulator"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "key = value config file");
    sub->add_option("--seed", o.seed, "master seed (falls back to STEREOTRUST_SEED)");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--jobs", o.jobs, "worker threads (default: one per repetition)");
    sub->add_option("--models", o.models, "comma-separated model list");
    sub->add_option("--tau", o.tau, "U-B period");
    sub->add_option("--top-k-features", o.top_k, "matched groups kept per target");
    sub->add_option("--sson-k", o.sson_k, "providers queried per request");
  };
  auto* generate = app.add_subcommand("generate", "write a synthetic world dump");
  auto* run = app.add_subcommand("run", "model comparison experiment");
  auto* sson = app.add_subcommand("sson", "stereotype-sharing experiment");
  auto* strategies = app.add_subcommand("update-strategies", "eager vs lazy model updates");
  auto* ingest = app.add_subcommand("ingest", "convert a JSONL rating dataset into a world dump");
  for (auto* s : {generate, run, sson, strategies, ingest}) common(s);
  ingest->add_option("--input", o.input, "JSONL dataset")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const ExperimentConfig cfg = resolve(o);
    const fs::path dir(o.out);
    if (generate->parsed()) {
      WorldConfig wc = cfg.world;
      const World w = generate_world(wc);
      auto f = open_out(dir, "world.jsonl");
      dump_world(w, f, provenance(cfg));
      std::cout << "wrote " << (dir / "world.jsonl").string() << " (" << w.ratings().size() << " ratings)\n";
    } else if (ingest->parsed()) {
      IngestConfig ic;
      ic.min_ratings = cfg.min_ratings;
      std::ifstream in(o.input);
      if (!in) throw ConfigError("cannot open dataset '" + o.input + "'");
      const World w = ingest_dataset(in, ic);
      auto f = open_out(dir, "world.jsonl");
      dump_world(w, f, provenance(cfg));
      std::cout << "wrote " << (dir / "world.jsonl").string() << " (" << w.agent_count() << " agents, "
                << w.ratings().size() << " ratings)\n";
    } else if (run->parsed()) {
      const auto r = run_experiment(cfg);
      write_outputs(r, dir, "");
      print_summary(r);
    } else if (sson->parsed()) {
      const auto r = run_sson_experiment(cfg);
      write_outputs(r, dir, "sson_");
      print_summary(r);
    } else if (strategies->parsed()) {
      const auto r = run_update_strategy_comparison(cfg);
      write_outputs(r, dir, "strategies_");
      print_summary(r);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
