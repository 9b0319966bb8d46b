#include <CLI11.hpp>
#include <iostream>

#include "chronolens/synthetic.hpp"

// Writes a small synthetic corpus (manifest, detections, embedding pairs and
// a ready-to-run config.json) for trying out the pipeline.
int main(int argc, char** argv) {
  chronolens::SyntheticSpec spec;
  std::string directory;

  CLI::App app{"Generate a synthetic photo-dating corpus"};
  app.add_option("directory", directory, "Output directory")->required();
  app.add_option("--images", spec.images, "Number of photographs")->capture_default_str();
  app.add_option("--dim", spec.dim, "Embedding dimension")->capture_default_str();
  app.add_option("--signal-noise", spec.signal_noise,
                 "Noise on the year-carrying dimensions")->capture_default_str();
  app.add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = chronolens::write_synthetic_corpus(directory, spec);
    std::cout << "wrote " << config.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
