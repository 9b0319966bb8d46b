#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <json.hpp>
#include <map>

#include "chronolens/error.hpp"
#include "chronolens/pipeline.hpp"
#include "chronolens/synthetic.hpp"
#include "chronolens/util.hpp"
#include "fixtures.hpp"

using namespace chronolens;
namespace fs = std::filesystem;

namespace {

// Small corpus with a fast sampler and a low class-count cut.
fs::path small_corpus(const fixture::TempDir& dir, const std::string& overrides = "{}") {
  SyntheticSpec spec;
  spec.images = 300;
  const auto config_path = write_synthetic_corpus(dir.path(), spec);
  auto j = nlohmann::json::parse(read_text_file(config_path));
  j["features"] = {{"min_class_count", 10}};
  j["regress"]["chains"] = 2;
  j["regress"]["warmup"] = 300;
  j["regress"]["draws"] = 300;
  j.merge_patch(nlohmann::json::parse(overrides));
  write_text_file(config_path, j.dump(2));
  return config_path;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = read_text_file(e.path());
  }
  return out;
}

void run_all(const RunConfig& c) {
  cmd_split(c);
  cmd_zeroshot(c);
  cmd_train_probe(c);
  cmd_eval(c);
  cmd_features(c);
  cmd_regress(c);
  cmd_report(c);
}

int cli(const std::string& args) {
  const std::string command = std::string(CHRONOLENS_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing resolves paths and applies defaults") {
  const auto c = parse_run_config(R"({"manifest": "m.csv", "embeddings": {"gray": "/abs/g"},
                                      "seed": 7, "probe": {"max_iters": 20}})",
                                  "/base");
  CHECK(c.manifest == fs::path("/base/m.csv"));
  CHECK(c.embeddings.at("gray") == fs::path("/abs/g"));
  CHECK(c.output_dir == fs::path("/base/out"));
  CHECK(c.split == fs::path("/base/out/split.csv"));
  CHECK(c.seed == 7);
  CHECK(c.mcmc.seed == 7);
  CHECK(c.probe.max_iters == 20);
  CHECK(c.probe.l2_lambda == 1e-4);
  CHECK(c.test_fraction == 0.2);
  CHECK(c.features.confidence_threshold == 0.8);
  CHECK(c.features.min_class_count == 200);
  CHECK(c.regression_mode == RegressionMode::per_class);
}

TEST_CASE("config errors are usage errors") {
  CHECK_THROWS_AS(parse_run_config("{", "/"), UsageError);
  CHECK_THROWS_AS(parse_run_config(R"({"manifets": "x"})", "/"), UsageError);
  CHECK_THROWS_AS(parse_run_config(R"({"probe": {"lr": 1}})", "/"), UsageError);
  CHECK_THROWS_AS(parse_run_config(R"({"test_fraction": 1.5})", "/"), UsageError);
  CHECK_THROWS_AS(parse_run_config(R"({"regress": {"mode": "pooled"}})", "/"), UsageError);
  CHECK_THROWS_AS(parse_run_config(R"({"seed": "seven"})", "/"), UsageError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), UsageError);
}

TEST_CASE("commands name the missing upstream artifact") {
  fixture::TempDir dir("pipe");
  const auto c = load_run_config(small_corpus(dir));
  try {
    cmd_zeroshot(c);
    FAIL("expected MissingArtifactError");
  } catch (const MissingArtifactError& e) {
    const std::string what = e.what();
    CHECK(what.find("split.csv") != std::string::npos);
    CHECK(what.find("chronolens split") != std::string::npos);
  }
  CHECK_THROWS_AS(cmd_regress(c), MissingArtifactError);
  CHECK_THROWS_AS(cmd_report(c), MissingArtifactError);
  CHECK_THROWS_AS(cmd_eval(c), MissingArtifactError);
}

TEST_CASE("full pipeline writes every artifact and reruns byte-identically") {
  fixture::TempDir dir("pipe");
  const auto c = load_run_config(small_corpus(dir));
  run_all(c);
  for (const char* name :
       {"split.csv", "rejected.csv", "zeroshot_grayscale.csv", "zeroshot_colorized.csv",
        "probe_grayscale.json", "probe_grayscale.weights.npy", "probe_grayscale.biases.npy",
        "probe_grayscale.csv", "probe_grayscale_all.csv", "summary_probe_grayscale.json",
        "ks.csv", "presence.csv", "features.json", "effects.csv", "effects_failures.csv",
        "regress.json", "hist_zeroshot_grayscale.svg", "mae_table.md",
        "effects_forest.svg", "report.md"}) {
    CHECK_MESSAGE(fs::exists(c.output_dir / name), name);
  }
  const auto rejected = read_text_file(c.output_dir / "rejected.csv");
  CHECK(rejected.find("undated_0") != std::string::npos);

  const auto summary = nlohmann::json::parse(read_text_file(c.output_dir / "summary_probe_grayscale.json"));
  CHECK(summary.contains("histogram"));
  CHECK(summary["ks_comparisons"].size() == 1);

  const auto first = snapshot(c.output_dir);
  fs::remove_all(c.output_dir);
  run_all(c);
  CHECK(snapshot(c.output_dir) == first);
}

TEST_CASE("eval of a run against itself gives D = 0") {
  fixture::TempDir dir("pipe");
  const auto c = load_run_config(
      small_corpus(dir, R"({"eval": {"ks_pairs": [["zeroshot_grayscale", "zeroshot_grayscale"]]}})"));
  cmd_split(c);
  cmd_zeroshot(c);
  cmd_eval(c);
  const auto ks = read_text_file(c.output_dir / "ks.csv");
  CHECK(ks.rfind("run_a,run_b,statistic,p_value,n1,n2\n"
                 "zeroshot_grayscale,zeroshot_grayscale,0,1,", 0) == 0);
}

TEST_CASE("CLI exit codes") {
  fixture::TempDir dir("cli");
  const auto config = small_corpus(dir);
  CHECK(cli("--help") == 0);
  CHECK(cli("split --help") == 0);
  CHECK(cli("") == kExitUsage);
  CHECK(cli("split") == kExitUsage);
  CHECK(cli("bogus --config " + config.string()) == kExitUsage);
  CHECK(cli("split --config " + (dir / "missing.json").string()) == kExitUsage);

  CHECK(cli("split --config " + config.string()) == kExitOk);
  const auto split = read_text_file(dir / "out" / "split.csv");
  CHECK(cli("split --config " + config.string()) == kExitOk);
  CHECK(read_text_file(dir / "out" / "split.csv") == split);

  CHECK(cli("split --config " + config.string() + " --seed 99 --out " + (dir / "other").string()) == kExitOk);
  CHECK(read_text_file(dir / "other" / "split.csv") != split);

  fs::rename(dir / "manifest.csv", dir / "manifest.bak");
  CHECK(cli("split --config " + config.string()) == kExitData);
  fs::rename(dir / "manifest.bak", dir / "manifest.csv");

  CHECK(cli("regress --config " + config.string()) == kExitData);
}

TEST_CASE("CLI reports fit-diagnostic failures with exit code 3") {
  fixture::TempDir dir("cli");
  const auto config = small_corpus(dir, R"({"regress": {"max_r_hat": 0.5}})");
  for (const char* cmd : {"split", "train-probe", "features"}) {
    REQUIRE(cli(std::string(cmd) + " --config " + config.string()) == kExitOk);
  }
  CHECK(cli("regress --config " + config.string()) == kExitDiagnostics);
  const auto failures = read_text_file(dir / "out" / "effects_failures.csv");
  CHECK(failures.find("person") != std::string::npos);
}
