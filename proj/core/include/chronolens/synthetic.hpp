#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace chronolens {

// Parameters of the bundled synthetic corpus: year information sits linearly
// in the first `signal_dims` embedding dimensions, and images with a person
// carry half the noise there.
struct SyntheticSpec {
  std::size_t images = 2000;
  std::size_t dim = 16;
  std::size_t signal_dims = 4;
  double signal_noise = 0.6;
  double person_noise_factor = 0.5;
  double person_rate = 0.5;
  double background_noise = 0.5;
  bool colorized_variant = true;
  std::uint64_t seed = 1;
};

// Writes manifest.csv, detections.csv, emb_grayscale, emb_colorized (if
// enabled) and emb_text pairs plus config.json into `directory`. Returns the
// config path.
std::filesystem::path write_synthetic_corpus(const std::filesystem::path& directory,
                                             const SyntheticSpec& spec);

}  // namespace chronolens
