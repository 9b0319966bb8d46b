#include "chronolens/pipeline.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>
#include <unordered_map>

#include "chronolens/csv.hpp"
#include "chronolens/dataset.hpp"
#include "chronolens/embeddings.hpp"
#include "chronolens/eval_stats.hpp"
#include "chronolens/report.hpp"
#include "chronolens/util.hpp"
#include "chronolens/zero_shot.hpp"

namespace chronolens {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

MissingArtifactError::MissingArtifactError(const fs::path& file,
                                           const std::string& producer)
    : DataError("missing " + file.string() + " (produced by `chronolens " + producer +
                "`)") {}

// ---------------------------------------------------------------------------
// Config

namespace {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

void check_keys(const nlohmann::json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw UsageError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      throw UsageError("unknown config key '" + key + "' in " + where);
    }
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const fs::path& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"manifest", "split", "embeddings", "text_embeddings", "detections",
              "output_dir", "seed", "test_fraction", "year_range", "prompt_template",
              "logit_scale", "probe", "features", "regress", "eval"});

  auto resolve = [&](const std::string& p) -> fs::path {
    if (p.empty()) return {};
    const fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  RunConfig c;
  try {
    c.manifest = resolve(get_or<std::string>(j, "manifest", ""));
    c.output_dir = resolve(get_or<std::string>(j, "output_dir", "out"));
    c.split = resolve(get_or<std::string>(j, "split", ""));
    if (c.split.empty()) c.split = c.output_dir / "split.csv";
    if (j.contains("embeddings")) {
      for (const auto& [label, stem] : j.at("embeddings").items()) {
        if (label.empty() || label.find_first_of("/\\ ") != std::string::npos) {
          throw UsageError("embedding label '" + label + "' must be a plain word");
        }
        c.embeddings.emplace(label, resolve(stem.get<std::string>()));
      }
    }
    c.text_embeddings = resolve(get_or<std::string>(j, "text_embeddings", ""));
    c.detections = resolve(get_or<std::string>(j, "detections", ""));
    c.seed = get_or<std::uint64_t>(j, "seed", 0);
    c.test_fraction = get_or<double>(j, "test_fraction", c.test_fraction);
    if (j.contains("year_range")) {
      const auto range = j.at("year_range").get<std::vector<int>>();
      if (range.size() != 2 || range[0] > range[1]) {
        throw UsageError("year_range must be [first, last]");
      }
      c.first_year = range[0];
      c.last_year = range[1];
    }
    c.prompt_template = get_or<std::string>(j, "prompt_template", c.prompt_template);
    c.logit_scale = get_or<double>(j, "logit_scale", c.logit_scale);

    if (j.contains("probe")) {
      const auto& p = j.at("probe");
      check_keys(p, "probe", {"l2_lambda", "max_iters", "tolerance"});
      c.probe.l2_lambda = get_or<double>(p, "l2_lambda", c.probe.l2_lambda);
      c.probe.max_iters = get_or<int>(p, "max_iters", c.probe.max_iters);
      c.probe.tolerance = get_or<double>(p, "tolerance", c.probe.tolerance);
    }
    if (j.contains("features")) {
      const auto& f = j.at("features");
      check_keys(f, "features",
                 {"confidence_threshold", "min_class_count", "focus_classes", "count_mode"});
      c.features.confidence_threshold =
          get_or<double>(f, "confidence_threshold", c.features.confidence_threshold);
      c.features.min_class_count =
          get_or<std::size_t>(f, "min_class_count", c.features.min_class_count);
      c.features.focus_classes =
          get_or<std::vector<std::string>>(f, "focus_classes", c.features.focus_classes);
      const auto mode = get_or<std::string>(f, "count_mode", "detections");
      if (mode == "detections") {
        c.features.count_mode = ClassCountMode::detections;
      } else if (mode == "images") {
        c.features.count_mode = ClassCountMode::images;
      } else {
        throw UsageError("features.count_mode must be detections or images");
      }
    }
    if (j.contains("regress")) {
      const auto& r = j.at("regress");
      check_keys(r, "regress",
                 {"predictions", "chains", "warmup", "draws", "mode", "dump_draws",
                  "max_r_hat", "target_accept"});
      c.regress_predictions = get_or<std::string>(r, "predictions", "");
      c.mcmc.chains = get_or<int>(r, "chains", c.mcmc.chains);
      c.mcmc.warmup = get_or<int>(r, "warmup", c.mcmc.warmup);
      c.mcmc.draws = get_or<int>(r, "draws", c.mcmc.draws);
      c.mcmc.max_r_hat = get_or<double>(r, "max_r_hat", c.mcmc.max_r_hat);
      c.mcmc.target_accept = get_or<double>(r, "target_accept", c.mcmc.target_accept);
      c.dump_draws = get_or<bool>(r, "dump_draws", false);
      const auto mode = get_or<std::string>(r, "mode", "per_class");
      if (mode == "per_class") {
        c.regression_mode = RegressionMode::per_class;
      } else if (mode == "joint") {
        c.regression_mode = RegressionMode::joint;
      } else {
        throw UsageError("regress.mode must be per_class or joint");
      }
    }
    if (j.contains("eval")) {
      const auto& e = j.at("eval");
      check_keys(e, "eval", {"bin_width", "ks_pairs"});
      c.bin_width = get_or<int>(e, "bin_width", c.bin_width);
      if (e.contains("ks_pairs")) {
        for (const auto& pair : e.at("ks_pairs")) {
          const auto names = pair.get<std::vector<std::string>>();
          if (names.size() != 2) throw UsageError("eval.ks_pairs entries need two run names");
          c.ks_pairs.emplace_back(names[0], names[1]);
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
  if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) {
    throw UsageError("test_fraction must lie in (0, 1)");
  }
  if (c.bin_width < 1) throw UsageError("eval.bin_width must be >= 1");
  c.mcmc.seed = c.seed;
  c.probe.seed = c.seed;
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  if (!fs::exists(path)) throw UsageError("config file " + path.string() + " not found");
  return parse_run_config(read_text_file(path), path.parent_path());
}

// ---------------------------------------------------------------------------
// Shared loading

namespace {

void require(const fs::path& path, const std::string& what) {
  if (path.empty()) throw UsageError("config does not set " + what);
}

void require_artifact(const fs::path& path, const std::string& producer) {
  if (!fs::exists(path)) throw MissingArtifactError(path, producer);
}

// Manifest records inside the year range, with the split file applied.
std::vector<PhotoRecord> load_study(const RunConfig& config, bool with_split) {
  require(config.manifest, "manifest");
  auto manifest = load_manifest(config.manifest);
  auto records = filter_year_range(manifest.records, config.first_year, config.last_year);
  if (with_split) {
    require_artifact(config.split, "split");
    apply_split(records, read_split(config.split));
  }
  return records;
}

std::vector<std::size_t> rows_for(const EmbeddingMatrix& m,
                                  const std::vector<const PhotoRecord*>& records,
                                  const std::string& label) {
  std::vector<std::size_t> rows;
  std::vector<std::string> missing;
  for (const auto* r : records) {
    if (auto i = m.find(r->image_id)) {
      rows.push_back(*i);
    } else {
      missing.push_back(r->image_id);
    }
  }
  if (!missing.empty()) {
    throw DataError("embeddings '" + label + "' lack " + std::to_string(missing.size()) +
                    " image id(s), first: " + missing.front());
  }
  return rows;
}

std::vector<const PhotoRecord*> with_split(const std::vector<PhotoRecord>& records,
                                           std::initializer_list<Split> wanted) {
  std::vector<const PhotoRecord*> out;
  for (const auto& r : records) {
    if (std::find(wanted.begin(), wanted.end(), r.split) != wanted.end()) out.push_back(&r);
  }
  return out;
}

std::unordered_map<std::string, int> year_map(const std::vector<PhotoRecord>& records) {
  std::unordered_map<std::string, int> out;
  for (const auto& r : records) out.emplace(r.image_id, r.year);
  return out;
}

void require_embeddings(const RunConfig& config) {
  if (config.embeddings.empty()) throw UsageError("config sets no embeddings");
}

Json summary_json(const ErrorSummary& s) {
  Json j;
  j["n"] = s.n;
  j["mae"] = s.mae;
  j["mean_signed_error"] = s.mean_signed_error;
  j["bin_width"] = s.bin_width;
  Json hist = Json::object();
  for (const auto& [bin, count] : s.histogram) hist[std::to_string(bin)] = count;
  j["histogram"] = hist;
  return j;
}

ErrorSummary summary_from_json(const nlohmann::json& j) {
  ErrorSummary s;
  s.n = j.at("n").get<std::size_t>();
  s.mae = j.at("mae").get<double>();
  s.mean_signed_error = j.at("mean_signed_error").get<double>();
  s.bin_width = get_or<int>(j, "bin_width", 1);
  for (const auto& [key, value] : j.at("histogram").items()) {
    const auto bin = parse_int(key);
    if (!bin) throw DataError("bad histogram key '" + key + "'");
    s.histogram[static_cast<int>(*bin)] = value.get<std::size_t>();
  }
  return s;
}

// Run names of prediction files in the output directory, sorted.
std::vector<std::string> prediction_runs(const fs::path& dir) {
  std::vector<std::string> runs;
  if (!fs::exists(dir)) return runs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.path().extension() != ".csv") continue;
    if (name.starts_with("zeroshot_") || name.starts_with("probe_")) {
      runs.push_back(entry.path().stem().string());
    }
  }
  std::sort(runs.begin(), runs.end());
  return runs;
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands

CommandResult cmd_split(const RunConfig& config) {
  require(config.manifest, "manifest");
  const auto manifest = load_manifest(config.manifest);
  const auto in_range =
      filter_year_range(manifest.records, config.first_year, config.last_year);
  const auto split = stratified_split(in_range, {config.test_fraction, config.seed});

  CommandResult result;
  write_split(config.split, split);
  result.artifacts.push_back(config.split);

  std::string rejected = "line,image_id,reason\n";
  for (const auto& r : manifest.rejected) {
    rejected += csv::format_row({std::to_string(r.line), r.image_id, r.reason});
  }
  const auto rejected_path = config.output_dir / "rejected.csv";
  write_text_file(rejected_path, rejected);
  result.artifacts.push_back(rejected_path);

  const auto test = std::count_if(split.begin(), split.end(),
                                  [](const PhotoRecord& r) { return r.split == Split::test; });
  result.messages.push_back(
      std::to_string(manifest.records.size() + manifest.rejected.size()) + " rows: " +
      std::to_string(manifest.rejected.size()) + " rejected, " +
      std::to_string(manifest.records.size() - in_range.size()) + " outside " +
      std::to_string(config.first_year) + ".." + std::to_string(config.last_year) + ", " +
      std::to_string(in_range.size() - static_cast<std::size_t>(test)) + " train, " +
      std::to_string(test) + " test");
  return result;
}

CommandResult cmd_zeroshot(const RunConfig& config) {
  require_embeddings(config);
  require(config.text_embeddings, "text_embeddings");
  const auto records = load_study(config, true);
  const auto test = with_split(records, {Split::test});
  const auto years = year_map(records);

  const YearPromptSet prompts(load_embedding_pair(config.text_embeddings), config.first_year,
                              config.last_year, config.prompt_template);
  CommandResult result;
  for (const auto& [label, stem] : config.embeddings) {
    const auto all = load_embedding_pair(stem);
    const auto rows = rows_for(all, test, label);
    auto predictions = zero_shot_predict(all.select(rows), prompts);
    attach_actual_years(predictions, years);
    const auto path = config.output_dir / ("zeroshot_" + label + ".csv");
    write_predictions(path, predictions);
    result.artifacts.push_back(path);
    result.messages.push_back("zeroshot " + label + ": MAE " +
                              format_double(summarize_errors(predictions).mae) + " on " +
                              std::to_string(predictions.size()) + " test images");
  }
  return result;
}

CommandResult cmd_train_probe(const RunConfig& config) {
  require_embeddings(config);
  const auto records = load_study(config, true);
  const auto train = with_split(records, {Split::train});
  const auto test = with_split(records, {Split::test});
  const auto assigned = with_split(records, {Split::train, Split::test});
  const auto years = year_map(records);

  CommandResult result;
  for (const auto& [label, stem] : config.embeddings) {
    const auto all = load_embedding_pair(stem);
    std::vector<int> labels;
    for (const auto* r : train) labels.push_back(r->year);
    TrainStats stats;
    const auto model =
        train_probe(all.select(rows_for(all, train, label)), labels, config.probe, &stats);
    const auto model_stem = config.output_dir / ("probe_" + label);
    save_probe(model_stem, model);
    for (const char* suffix : {".json", ".weights.npy", ".biases.npy"}) {
      auto p = model_stem;
      p += suffix;
      result.artifacts.push_back(p);
    }

    auto test_predictions = probe_predict(model, all.select(rows_for(all, test, label)));
    attach_actual_years(test_predictions, years);
    auto all_predictions = probe_predict(model, all.select(rows_for(all, assigned, label)));
    attach_actual_years(all_predictions, years);

    const auto test_path = config.output_dir / ("probe_" + label + ".csv");
    const auto all_path = config.output_dir / ("probe_" + label + "_all.csv");
    write_predictions(test_path, test_predictions);
    write_predictions(all_path, all_predictions);
    result.artifacts.push_back(test_path);
    result.artifacts.push_back(all_path);
    result.messages.push_back(
        "probe " + label + ": loss " + format_double(stats.initial_loss) + " -> " +
        format_double(stats.final_loss) + " in " + std::to_string(stats.iterations) +
        " iterations, test MAE " +
        (test_predictions.empty() ? std::string("n/a")
                                  : format_double(summarize_errors(test_predictions).mae)));
  }
  return result;
}

CommandResult cmd_eval(const RunConfig& config) {
  const auto runs = prediction_runs(config.output_dir);
  if (runs.empty()) {
    throw MissingArtifactError(config.output_dir / "zeroshot_<label>.csv",
                               "zeroshot or train-probe");
  }

  std::unordered_map<std::string, std::string> scenes;
  if (!config.manifest.empty() && fs::exists(config.manifest)) {
    for (const auto& r : load_manifest(config.manifest).records) {
      if (!r.scene.empty()) scenes.emplace(r.image_id, r.scene);
    }
  }

  std::map<std::string, std::vector<DatePrediction>> predictions;
  for (const auto& run : runs) {
    predictions.emplace(run, read_predictions(config.output_dir / (run + ".csv")));
  }

  auto pairs = config.ks_pairs;
  if (pairs.empty() && config.embeddings.size() >= 2) {
    const auto a = config.embeddings.begin()->first;
    const auto b = std::next(config.embeddings.begin())->first;
    pairs = {{"zeroshot_" + a, "zeroshot_" + b}, {"probe_" + a, "probe_" + b}};
  }

  CommandResult result;
  std::map<std::string, Json> comparisons;
  std::string ks_csv = "run_a,run_b,statistic,p_value,n1,n2\n";
  for (const auto& [a, b] : pairs) {
    const auto ia = predictions.find(a);
    const auto ib = predictions.find(b);
    if (ia == predictions.end() || ib == predictions.end()) {
      if (!config.ks_pairs.empty()) {
        throw MissingArtifactError(config.output_dir / ((ia == predictions.end() ? a : b) + ".csv"),
                                   "zeroshot or train-probe");
      }
      continue;
    }
    const auto ea = signed_errors(ia->second);
    const auto eb = signed_errors(ib->second);
    const std::vector<double> da(ea.begin(), ea.end());
    const std::vector<double> db(eb.begin(), eb.end());
    const auto ks = ks_two_sample(da, db);
    ks_csv += csv::format_row({a, b, format_double(ks.statistic), format_double(ks.p_value),
                               std::to_string(ks.n1), std::to_string(ks.n2)});
    for (const auto& [self, other] : {std::pair{a, b}, std::pair{b, a}}) {
      Json c;
      c["other"] = other;
      c["statistic"] = ks.statistic;
      c["p_value"] = ks.p_value;
      c["n1"] = self == a ? ks.n1 : ks.n2;
      c["n2"] = self == a ? ks.n2 : ks.n1;
      comparisons[self].push_back(c);
    }
    result.messages.push_back("KS " + a + " vs " + b + ": D=" + format_double(ks.statistic) +
                              " p=" + format_double(ks.p_value));
  }

  for (const auto& [run, preds] : predictions) {
    if (preds.empty()) continue;
    const auto summary = summarize_errors(preds, config.bin_width);
    auto j = summary_json(summary);
    j["ks_comparisons"] = comparisons.contains(run) ? comparisons[run] : Json::array();
    const auto path = config.output_dir / ("summary_" + run + ".json");
    write_text_file(path, j.dump(2) + "\n");
    result.artifacts.push_back(path);

    std::string groups = "scene,n,mae,mean_signed_error\n";
    for (const auto& [scene, s] : group_errors(preds, scenes, config.bin_width)) {
      groups += csv::format_row({scene, std::to_string(s.n), format_double(s.mae),
                                 format_double(s.mean_signed_error)});
    }
    const auto group_path = config.output_dir / ("scene_errors_" + run + ".csv");
    write_text_file(group_path, groups);
    result.artifacts.push_back(group_path);
    result.messages.push_back(run + ": n=" + std::to_string(summary.n) +
                              " MAE=" + format_double(summary.mae) +
                              " mean signed error=" + format_double(summary.mean_signed_error));
  }
  const auto ks_path = config.output_dir / "ks.csv";
  write_text_file(ks_path, ks_csv);
  result.artifacts.push_back(ks_path);
  return result;
}

CommandResult cmd_features(const RunConfig& config) {
  require(config.detections, "detections");
  const auto records = load_study(config, false);
  const auto detections = load_detections(config.detections);
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const auto& r : records) ids.push_back(r.image_id);
  if (ids.empty()) throw DataError("no manifest records inside the year range");

  const auto presence = build_presence(detections.records, ids, config.features);

  CommandResult result;
  const auto presence_path = config.output_dir / "presence.csv";
  write_presence(presence_path, presence.matrix);
  result.artifacts.push_back(presence_path);

  Json log;
  log["classes"] = presence.matrix.classes;
  Json counts = Json::object();
  for (const auto& [label, count] : presence.class_counts) counts[label] = count;
  log["class_counts"] = counts;
  log["warnings"] = presence.warnings;
  log["confidence_threshold"] = config.features.confidence_threshold;
  log["min_class_count"] = config.features.min_class_count;
  log["count_mode"] =
      config.features.count_mode == ClassCountMode::detections ? "detections" : "images";
  log["focus_classes"] = config.features.focus_classes;
  Json rejected = Json::array();
  for (const auto& r : detections.rejected) {
    rejected.push_back({{"line", r.line}, {"reason", r.reason}});
  }
  log["rejected"] = rejected;
  const auto log_path = config.output_dir / "features.json";
  write_text_file(log_path, log.dump(2) + "\n");
  result.artifacts.push_back(log_path);

  for (const auto& w : presence.warnings) result.messages.push_back("warning: " + w);
  result.messages.push_back(std::to_string(presence.matrix.cols()) + " classes retained over " +
                            std::to_string(presence.matrix.rows()) + " images; " +
                            std::to_string(detections.rejected.size()) +
                            " detection rows rejected");
  return result;
}

CommandResult cmd_regress(const RunConfig& config) {
  const auto presence_path = config.output_dir / "presence.csv";
  require_artifact(presence_path, "features");
  std::string run = config.regress_predictions;
  if (run.empty()) {
    require_embeddings(config);
    run = "probe_" + config.embeddings.begin()->first + "_all";
  }
  const auto predictions_path = config.output_dir / (run + ".csv");
  require_artifact(predictions_path,
                   run.starts_with("zeroshot_") ? "zeroshot" : "train-probe");

  const auto presence = read_presence(presence_path);
  const auto predictions = read_predictions(predictions_path);
  EffectsReport report;
  try {
    report = run_all_effects(presence, predictions, config.mcmc, config.regression_mode);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }

  CommandResult result;
  const auto effects_path = config.output_dir / "effects.csv";
  write_effects(effects_path, report.effects);
  result.artifacts.push_back(effects_path);

  std::string failures = "class,reason,diagnostic\n";
  for (const auto& f : report.failures) {
    failures += csv::format_row({f.class_name, f.reason, f.diagnostic ? "1" : "0"});
    result.messages.push_back("fit failed for " + f.class_name + ": " + f.reason);
    if (f.diagnostic) result.exit_code = kExitDiagnostics;
  }
  const auto failures_path = config.output_dir / "effects_failures.csv";
  write_text_file(failures_path, failures);
  result.artifacts.push_back(failures_path);

  Json diag = Json::object();
  diag["predictions"] = run;
  diag["mode"] = config.regression_mode == RegressionMode::per_class ? "per_class" : "joint";
  Json fits = Json::object();
  for (const auto& [name, samples] : report.samples) {
    Json f;
    f["parameters"] = samples.names();
    f["r_hat"] = samples.r_hat;
    f["ess"] = samples.ess;
    f["acceptance_rate"] = samples.acceptance_rate;
    fits[name] = f;
    if (config.dump_draws) {
      for (auto& p : write_draws(config.output_dir / "draws", name, samples)) {
        result.artifacts.push_back(std::move(p));
      }
    }
  }
  diag["fits"] = fits;
  const auto diag_path = config.output_dir / "regress.json";
  write_text_file(diag_path, diag.dump(2) + "\n");
  result.artifacts.push_back(diag_path);

  for (const auto& e : report.effects) {
    result.messages.push_back(e.class_name + ": b1 " + format_double(e.b1_mean) + " [" +
                              format_double(e.b1_hdi.low) + ", " +
                              format_double(e.b1_hdi.high) + "]");
  }
  return result;
}

CommandResult cmd_report(const RunConfig& config) {
  std::vector<report::NamedSummary> runs;
  if (fs::exists(config.output_dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(config.output_dir)) {
      const auto name = entry.path().filename().string();
      if (name.starts_with("summary_") && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      try {
        runs.emplace_back(f.stem().string().substr(8),
                          summary_from_json(nlohmann::json::parse(read_text_file(f))));
      } catch (const nlohmann::json::exception& e) {
        throw DataError(f.string() + ": " + e.what());
      }
    }
  }
  if (runs.empty()) {
    throw MissingArtifactError(config.output_dir / "summary_<run>.json", "eval");
  }

  CommandResult result;
  std::string md = "# Dating error report\n\n## Mean absolute error\n\n";
  md += report::mae_table_markdown(runs);
  md += "\n## Signed error histograms\n\n";
  for (const auto& [name, summary] : runs) {
    const auto path = config.output_dir / ("hist_" + name + ".svg");
    write_text_file(path, report::histogram_svg(summary, name + ": signed error"));
    result.artifacts.push_back(path);
    md += "- [" + name + "](" + path.filename().string() + ")\n";
  }
  const auto table_path = config.output_dir / "mae_table.md";
  write_text_file(table_path, report::mae_table_markdown(runs));
  result.artifacts.push_back(table_path);

  std::vector<EffectSummary> effects;
  const auto effects_path = config.output_dir / "effects.csv";
  if (fs::exists(effects_path)) effects = read_effects(effects_path);
  const auto forest_path = config.output_dir / "effects_forest.svg";
  write_text_file(forest_path, report::effects_forest_svg(effects));
  result.artifacts.push_back(forest_path);
  md += "\n## Object effects on absolute error\n\n";
  md += report::effects_table_markdown(effects);
  if (!effects.empty()) md += "\n![effects](" + forest_path.filename().string() + ")\n";

  const auto md_path = config.output_dir / "report.md";
  write_text_file(md_path, md);
  result.artifacts.push_back(md_path);
  return result;
}

}  // namespace chronolens
