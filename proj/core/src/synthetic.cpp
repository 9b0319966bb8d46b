#include "chronolens/synthetic.hpp"

#include <array>
#include <cstdio>
#include <json.hpp>
#include <random>

#include "chronolens/csv.hpp"
#include "chronolens/dataset.hpp"
#include "chronolens/embeddings.hpp"
#include "chronolens/object_features.hpp"
#include "chronolens/util.hpp"

namespace chronolens {

namespace {

std::string image_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "img_%05zu", i);
  return buf;
}

std::string confidence_text(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", c);
  return buf;
}

}  // namespace

std::filesystem::path write_synthetic_corpus(const std::filesystem::path& directory,
                                             const SyntheticSpec& spec) {
  std::filesystem::create_directories(directory);
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> year_dist(kFirstYear, kLastYear);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> confident(0.81, 0.99);
  std::uniform_real_distribution<double> doubtful(0.5, 0.8);
  std::normal_distribution<double> normal(0.0, 1.0);

  static const std::array<const char*, 5> kScenes{"street", "portrait", "sports",
                                                   "landscape", "interior"};
  const auto& focus = default_focus_classes();
  // Presence rates of the classes that carry no signal; person is separate.
  static const std::array<double, 11> kNullRates{0.18, 0.22, 0.26, 0.30, 0.20, 0.24,
                                                 0.28, 0.16, 0.32, 0.19, 0.23};

  std::string manifest = "image_id,year,scene\n";
  std::string detections = "image_id,label,confidence,x1,y1,x2,y2\n";
  std::vector<std::string> ids;
  std::vector<float> gray;
  std::vector<float> colour;
  const double mid = 0.5 * (kFirstYear + kLastYear);
  const double half_range = 0.5 * (kLastYear - kFirstYear);

  for (std::size_t i = 0; i < spec.images; ++i) {
    const auto id = image_id(i);
    const int year = year_dist(rng);
    const auto* scene = kScenes[static_cast<std::size_t>(unit(rng) * kScenes.size()) % kScenes.size()];
    manifest += csv::format_row({id, std::to_string(year), scene});
    ids.push_back(id);

    const bool person = unit(rng) < spec.person_rate;
    const double t = (year - mid) / half_range;
    const double noise =
        spec.signal_noise * (person ? spec.person_noise_factor : 1.0);
    for (std::size_t d = 0; d < spec.dim; ++d) {
      const double v = d < spec.signal_dims ? t + noise * normal(rng)
                                            : spec.background_noise * normal(rng);
      gray.push_back(static_cast<float>(v));
      colour.push_back(static_cast<float>(v + 0.1 * normal(rng)));
    }

    if (person) {
      const int copies = unit(rng) < 0.3 ? 2 : 1;
      for (int c = 0; c < copies; ++c) {
        detections += csv::format_row({id, "person", confidence_text(confident(rng)),
                                       "10", "20", "110", "220"});
      }
    } else if (unit(rng) < 0.2) {
      // Below the confidence cut; must not register as a person.
      detections += csv::format_row({id, "person", confidence_text(doubtful(rng)), "", "", "", ""});
    }
    for (std::size_t c = 0; c + 1 < focus.size(); ++c) {
      if (unit(rng) < kNullRates[c]) {
        detections += csv::format_row({id, focus[c], confidence_text(confident(rng)), "", "", "", ""});
      } else if (unit(rng) < 0.05) {
        detections += csv::format_row({id, focus[c], confidence_text(doubtful(rng)), "", "", "", ""});
      }
    }
    if (unit(rng) < 0.25) {
      detections += csv::format_row({id, "tie", confidence_text(confident(rng)), "", "", "", ""});
    }
  }

  // Rows the study filters exclude: undated and out of range.
  manifest += csv::format_row({"undated_0", "", "street"});
  manifest += csv::format_row({"early_0", "1948", "portrait"});
  manifest += csv::format_row({"late_0", "2003", "sports"});

  write_text_file(directory / "manifest.csv", manifest);
  write_text_file(directory / "detections.csv", detections);
  write_embedding_pair(directory / "emb_grayscale", EmbeddingMatrix(ids, gray, spec.dim));
  if (spec.colorized_variant) {
    write_embedding_pair(directory / "emb_colorized", EmbeddingMatrix(ids, colour, spec.dim));
  }

  std::vector<std::string> years;
  std::vector<float> text;
  for (int y = kFirstYear; y <= kLastYear; ++y) {
    years.push_back(std::to_string(y));
    for (std::size_t d = 0; d < spec.dim; ++d) text.push_back(static_cast<float>(normal(rng)));
  }
  write_embedding_pair(directory / "emb_text", EmbeddingMatrix(years, text, spec.dim));

  nlohmann::ordered_json config;
  config["manifest"] = "manifest.csv";
  config["embeddings"] = {{"grayscale", "emb_grayscale"}};
  if (spec.colorized_variant) config["embeddings"]["colorized"] = "emb_colorized";
  config["text_embeddings"] = "emb_text";
  config["detections"] = "detections.csv";
  config["output_dir"] = "out";
  config["seed"] = spec.seed;
  config["regress"] = {{"predictions", "probe_grayscale_all"}};
  const auto config_path = directory / "config.json";
  write_text_file(config_path, config.dump(2) + "\n");
  return config_path;
}

}  // namespace chronolens
