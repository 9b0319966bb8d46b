#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <unistd.h>

namespace fixture {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("chronolens_" + tag + "_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<std::vector<double>> gaussian_rows(std::size_t rows, std::size_t dim,
                                               std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> out(rows, std::vector<double>(dim));
  for (auto& r : out) {
    for (auto& v : r) v = normal(rng);
  }
  return out;
}

chronolens::EmbeddingMatrix to_embeddings(const std::vector<std::vector<double>>& rows,
                                          const std::string& id_prefix) {
  std::vector<std::string> ids;
  std::vector<float> data;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ids.push_back(id_prefix + std::to_string(i));
    for (double v : rows[i]) data.push_back(static_cast<float>(v));
  }
  return {std::move(ids), std::move(data), rows.front().size()};
}

chronolens::EmbeddingMatrix to_year_embeddings(const std::vector<std::vector<double>>& rows) {
  std::vector<std::string> ids;
  std::vector<float> data;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ids.push_back(std::to_string(1950 + static_cast<int>(i)));
    for (double v : rows[i]) data.push_back(static_cast<float>(v));
  }
  return {std::move(ids), std::move(data), rows.front().size()};
}

Blobs separable_blobs(std::size_t n, std::size_t dim, double offset, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Blobs b;
  for (std::size_t i = 0; i < n; ++i) {
    const bool second = i % 2 == 1;
    std::vector<double> p(dim);
    for (auto& v : p) v = normal(rng);
    p[0] += second ? offset : -offset;
    b.points.push_back(std::move(p));
    b.years.push_back(second ? 1999 : 1950);
  }
  return b;
}

NbFixture nb_fixture(std::size_t n, double b0, double b1, double alpha, double rate,
                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution presence(rate);
  NbFixture f;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t x = presence(rng) ? 1 : 0;
    const double mu = std::exp(b0 + b1 * x);
    std::gamma_distribution<double> gamma(alpha, mu / alpha);
    std::poisson_distribution<std::int64_t> poisson(gamma(rng));
    f.x.push_back(x);
    f.y.push_back(poisson(rng));
  }
  return f;
}

}  // namespace fixture
