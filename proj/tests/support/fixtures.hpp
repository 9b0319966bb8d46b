#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "chronolens/embeddings.hpp"

namespace fixture {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::vector<std::vector<double>> gaussian_rows(std::size_t rows, std::size_t dim,
                                               std::mt19937_64& rng);

chronolens::EmbeddingMatrix to_embeddings(const std::vector<std::vector<double>>& rows,
                                          const std::string& id_prefix = "img_");

// Year-string ids for 1950..1950+rows-1.
chronolens::EmbeddingMatrix to_year_embeddings(const std::vector<std::vector<double>>& rows);

struct Blobs {
  std::vector<std::vector<double>> points;
  std::vector<int> years;
};

// Two Gaussian blobs with unit variance per coordinate, centred at
// +/- `offset` along the first axis, labelled 1950 and 1999.
Blobs separable_blobs(std::size_t n, std::size_t dim, double offset, std::mt19937_64& rng);

struct NbFixture {
  std::vector<std::uint8_t> x;
  std::vector<std::int64_t> y;
};

// y ~ NB(mu = exp(b0 + b1 x), alpha) drawn as a gamma-Poisson mixture;
// x ~ Bernoulli(rate).
NbFixture nb_fixture(std::size_t n, double b0, double b1, double alpha, double rate,
                     std::uint64_t seed);

}  // namespace fixture
