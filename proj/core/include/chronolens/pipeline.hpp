#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chronolens/bayes_glm.hpp"
#include "chronolens/error.hpp"
#include "chronolens/object_features.hpp"
#include "chronolens/probe.hpp"

namespace chronolens {

// Paths are resolved against the directory of the config file.
struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path split;  // defaults to <output_dir>/split.csv
  std::map<std::string, std::filesystem::path> embeddings;  // label -> stem
  std::filesystem::path text_embeddings;                    // stem
  std::filesystem::path detections;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;

  double test_fraction = 0.2;
  int first_year = 1950;
  int last_year = 1999;
  std::string prompt_template = "a photograph from the year {}";
  double logit_scale = 100.0;

  TrainConfig probe;
  FilterConfig features;
  McmcConfig mcmc;
  RegressionMode regression_mode = RegressionMode::per_class;
  // Predictions run used for regression, e.g. "probe_grayscale_all". Empty
  // selects probe_<first embedding label>_all.
  std::string regress_predictions;
  bool dump_draws = false;

  int bin_width = 1;
  // Run name pairs compared with the KS test. Empty selects the zero-shot and
  // probe pairs of the first two embedding labels.
  std::vector<std::pair<std::string, std::string>> ks_pairs;

};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file some command needs was never produced.
class MissingArtifactError : public DataError {
 public:
  MissingArtifactError(const std::filesystem::path& file,
                       const std::string& producer);
};

RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& json_text,
                           const std::filesystem::path& base_dir);

struct CommandResult {
  std::vector<std::filesystem::path> artifacts;
  std::vector<std::string> messages;
  int exit_code = 0;
};

CommandResult cmd_split(const RunConfig& config);
CommandResult cmd_zeroshot(const RunConfig& config);
CommandResult cmd_train_probe(const RunConfig& config);
CommandResult cmd_eval(const RunConfig& config);
CommandResult cmd_features(const RunConfig& config);
CommandResult cmd_regress(const RunConfig& config);
CommandResult cmd_report(const RunConfig& config);

// Exit codes: 0 success, 1 usage error, 2 data error, 3 fit diagnostics.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitDiagnostics = 3;

}  // namespace chronolens
