#include <CLI11.hpp>
#include <functional>
#include <iostream>
#include <map>

#include "chronolens/error.hpp"
#include "chronolens/pipeline.hpp"

namespace {

using Command = std::function<chronolens::CommandResult(const chronolens::RunConfig&)>;

struct Subcommand {
  const char* name;
  const char* help;
  Command run;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace chronolens;

  const std::vector<Subcommand> commands{
      {"split", "Filter the manifest to the year range and write a year-stratified train/test split",
       cmd_split},
      {"zeroshot", "Date test images by cosine similarity to per-year prompt embeddings",
       cmd_zeroshot},
      {"train-probe", "Train a softmax probe on train-split embeddings and predict years",
       cmd_train_probe},
      {"eval", "Summarize prediction errors and compare runs with the two-sample KS test",
       cmd_eval},
      {"features", "Filter detections and build the object presence matrix", cmd_features},
      {"regress", "Fit negative binomial regressions of absolute error on object presence",
       cmd_regress},
      {"report", "Render histograms, the MAE table and the effects forest plot", cmd_report},
  };

  CLI::App app{"chronolens: dating photographs from embeddings and analysing the errors"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "Run configuration JSON file")->required();
    sub->add_option("--seed", seed, "Root seed; overrides the config's seed");
    sub->add_option("--out", out_dir, "Output directory; overrides the config's output_dir");
    subs[c.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto config = load_run_config(config_path);
    for (const auto& c : commands) {
      auto* sub = subs.at(c.name);
      if (!sub->parsed()) continue;
      if (sub->count("--seed")) {
        config.seed = seed;
        config.mcmc.seed = seed;
        config.probe.seed = seed;
      }
      if (sub->count("--out")) {
        const bool default_split = config.split == config.output_dir / "split.csv";
        config.output_dir = out_dir;
        if (default_split) config.split = config.output_dir / "split.csv";
      }
      const auto result = c.run(config);
      for (const auto& m : result.messages) std::cout << m << "\n";
      for (const auto& a : result.artifacts) std::cout << "wrote " << a.string() << "\n";
      return result.exit_code;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const FitDiagnosticError& e) {
    std::cerr << "fit diagnostics: " << e.what() << "\n";
    return kExitDiagnostics;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
