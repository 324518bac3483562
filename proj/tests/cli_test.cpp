#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(STEREOTRUST_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("stereotrust_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string kConfig = std::string(STEREOTRUST_SOURCE_DIR) + "/configs/comparison.cfg";

}  // namespace

TEST(Cli, RunTwiceGivesIdenticalOutputs) {
  const auto a = scratch("a"), b = scratch("b");
  const std::string common = "run --config " + kConfig + " --seed 42 --jobs 2 --models feedback,eigentrust";
  ASSERT_EQ(run(common + " --out " + a.string()), 0);
  ASSERT_EQ(run(common + " --out " + b.string()), 0);
  for (const char* f : {"report.csv", "report.json", "predictions.csv"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_NE(slurp(a / f).find("config_hash"), std::string::npos) << f;
  }
  EXPECT_NE(slurp(a / "report.csv").find("# seed=42"), std::string::npos);
}

TEST(Cli, SeedFallsBackToEnvironment) {
  const auto d = scratch("env");
  ASSERT_EQ(run("generate --out " + d.string()), 0);
  ::setenv("STEREOTRUST_SEED", "7", 1);
  const int env_rc = run("generate --out " + (d / "env").string());
  ::unsetenv("STEREOTRUST_SEED");
  ASSERT_EQ(env_rc, 0);
  ASSERT_EQ(run("generate --seed 7 --out " + (d / "flag").string()), 0);
  EXPECT_EQ(slurp(d / "env" / "world.jsonl"), slurp(d / "flag" / "world.jsonl"));
  EXPECT_NE(slurp(d / "world.jsonl"), slurp(d / "flag" / "world.jsonl"));
}

TEST(Cli, MissingConfigIsConfigError) {
  EXPECT_EQ(run("run --config /nonexistent.cfg --out " + scratch("m").string()), 1);
}

TEST(Cli, UnknownConfigKeyIsConfigError) {
  const auto d = scratch("k");
  std::ofstream(d / "bad.cfg") << "seed = 1\nflavour = mint\n";
  EXPECT_EQ(run("run --config " + (d / "bad.cfg").string() + " --out " + d.string()), 1);
}

TEST(Cli, UnknownModelIsConfigError) {
  EXPECT_EQ(run("run --models nope --out " + scratch("u").string()), 1);
}

TEST(Cli, MalformedDatasetIsDataError) {
  const auto d = scratch("i");
  std::ofstream(d / "data.jsonl")
      << R"({"rater":"a","author":"b","review":"r","category":"c","label_or_value":"Helpful","seq":1})" << "\n"
      << "not json\n";
  const std::string cmd = std::string(STEREOTRUST_CLI) + " ingest --input " + (d / "data.jsonl").string() +
                          " --out " + d.string() + " 2>" + (d / "err.txt").string();
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_NE(slurp(d / "err.txt").find("line 2"), std::string::npos);
}

TEST(Cli, IngestWritesWorldDump) {
  const auto d = scratch("ok");
  {
    std::ofstream f(d / "data.jsonl");
    for (int i = 0; i < 3; ++i) {
      f << R"({"rater":"u)" << i << R"(","author":"w","review":"r","category":"c","label_or_value":"Very Helpful","seq":)"
        << i + 1 << "}\n";
    }
  }
  std::ofstream(d / "ingest.cfg") << "min_ratings = 1\n";
  ASSERT_EQ(run("ingest --config " + (d / "ingest.cfg").string() + " --input " + (d / "data.jsonl").string() +
                " --out " + d.string()),
            0);
  const std::string dump = slurp(d / "world.jsonl");
  EXPECT_NE(dump.find("\"provenance\""), std::string::npos);
  EXPECT_NE(dump.find("\"rater\":\"u2\""), std::string::npos);
}

TEST(Cli, SubcommandsWriteReports) {
  const auto d = scratch("s");
  ASSERT_EQ(run("update-strategies --config " + kConfig + " --tau 5 --out " + d.string()), 0);
  EXPECT_NE(slurp(d / "strategies_report.csv").find("U-B(5)"), std::string::npos);
  ASSERT_EQ(run("sson --config " + std::string(STEREOTRUST_SOURCE_DIR) + "/configs/sson.cfg --sson-k 3 --out " +
                d.string()),
            0);
  EXPECT_NE(slurp(d / "sson_report.json").find("\"sson_k\": 3"), std::string::npos);
}

TEST(Cli, NoSubcommandIsUsageError) { EXPECT_EQ(run(""), 1); }
