#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "chronolens/embeddings.hpp"
#include "chronolens/error.hpp"
#include "chronolens/npy.hpp"
#include "chronolens/util.hpp"
#include "fixtures.hpp"

using namespace chronolens;

namespace {

void write_pair(const fixture::TempDir& dir, std::size_t rows, std::size_t dim,
                std::size_t id_lines, std::vector<float> data = {}) {
  if (data.empty()) {
    for (std::size_t i = 0; i < rows * dim; ++i) data.push_back(static_cast<float>(i + 1));
  }
  npy::write(dir / "m.npy", npy::Array<float>{{rows, dim}, data});
  std::string ids;
  for (std::size_t i = 0; i < id_lines; ++i) ids += "id" + std::to_string(i) + "\n";
  write_text_file(dir / "m.ids.txt", ids);
}

}  // namespace

TEST_CASE("load a 3x4 matrix with three ids") {
  fixture::TempDir dir("emb");
  write_pair(dir, 3, 4, 3);
  const auto m = load_embeddings(dir / "m.npy", dir / "m.ids.txt");
  CHECK(m.rows() == 3);
  CHECK(m.dim() == 4);
  CHECK_FALSE(m.normalized());
  CHECK(m.ids()[2] == "id2");
  CHECK(m.row(2)[0] == 9.0f);
  CHECK(m.find("id1") == 1);
  CHECK_FALSE(m.find("nope"));
}

TEST_CASE("ids length mismatch is an error") {
  fixture::TempDir dir("emb");
  write_pair(dir, 3, 4, 2);
  CHECK_THROWS_AS(load_embeddings(dir / "m.npy", dir / "m.ids.txt"), DataError);
}

TEST_CASE("NaN entry names its row") {
  fixture::TempDir dir("emb");
  std::vector<float> data(10 * 2, 1.0f);
  data[7 * 2 + 1] = std::nanf("");
  write_pair(dir, 10, 2, 10, data);
  try {
    load_embeddings(dir / "m.npy", dir / "m.ids.txt");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("row 7") != std::string::npos);
  }
}

TEST_CASE("wrong dtype and shape are rejected") {
  fixture::TempDir dir("emb");
  npy::write(dir / "d.npy", npy::Array<double>{{2, 2}, {1, 2, 3, 4}});
  write_text_file(dir / "d.ids.txt", "a\nb\n");
  CHECK_THROWS_AS(load_embeddings(dir / "d.npy", dir / "d.ids.txt"), DataError);
  npy::write(dir / "v.npy", npy::Array<float>{{2}, {1, 2}});
  CHECK_THROWS_AS(load_embeddings(dir / "v.npy", dir / "d.ids.txt"), DataError);
  CHECK_THROWS_AS(load_embedding_pair(dir / "missing"), DataError);
}

TEST_CASE("constructor invariants") {
  CHECK_THROWS_AS(EmbeddingMatrix({"a"}, {1.0f}, 0), DataError);
  CHECK_THROWS_AS(EmbeddingMatrix({"a", "b"}, {1.0f, 2.0f, 3.0f}, 1), DataError);
  CHECK_THROWS_AS(EmbeddingMatrix({"a", "a"}, {1.0f, 2.0f}, 1), DataError);
  CHECK_THROWS_AS(EmbeddingMatrix({"a"}, {INFINITY}, 1), DataError);
}

TEST_CASE("l2_normalize examples") {
  const EmbeddingMatrix m({"a"}, {3.0f, 4.0f}, 2);
  const auto n = l2_normalize(m);
  CHECK(n.normalized());
  CHECK(n.row(0)[0] == doctest::Approx(0.6).epsilon(1e-7));
  CHECK(n.row(0)[1] == doctest::Approx(0.8).epsilon(1e-7));

  const EmbeddingMatrix unit({"u"}, {1.0f, 0.0f, 0.0f}, 3);
  const auto u = l2_normalize(unit);
  CHECK(std::abs(u.row(0)[0] - 1.0f) < 1e-7);

  const EmbeddingMatrix zero({"z0", "z1"}, {1.0f, 0.0f, 0.0f, 0.0f}, 2);
  try {
    l2_normalize(zero);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("z1") != std::string::npos);
  }
}

TEST_CASE("normalization properties on random matrices") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + rng() % 64;
    auto rows = fixture::gaussian_rows(30, dim, rng);
    for (auto& r : rows) {
      const double scale = std::exp(std::normal_distribution<double>(0, 3)(rng));
      for (auto& v : r) v *= scale;
    }
    const auto once = l2_normalize(fixture::to_embeddings(rows));
    const auto twice = l2_normalize(once);
    for (std::size_t i = 0; i < once.rows(); ++i) {
      CHECK(std::abs(norm(once.row(i)) - 1.0) < 1e-5);
      for (std::size_t d = 0; d < dim; ++d) {
        CHECK(std::abs(once.row(i)[d] - twice.row(i)[d]) <= 1e-7);
      }
      for (std::size_t j = 0; j < once.rows(); ++j) {
        const double c = cosine_similarity(once.row(i), once.row(j));
        CHECK(c >= -1.0 - 1e-6);
        CHECK(c <= 1.0 + 1e-6);
      }
    }
  }
}

TEST_CASE("load, write, load is bit-exact") {
  fixture::TempDir dir("emb");
  std::mt19937_64 rng(8);
  const auto m = fixture::to_embeddings(fixture::gaussian_rows(25, 9, rng));
  write_embedding_pair(dir / "a", m);
  const auto once = load_embedding_pair(dir / "a");
  write_embedding_pair(dir / "b", once);
  const auto twice = load_embedding_pair(dir / "b");
  CHECK(twice.ids() == m.ids());
  CHECK(std::memcmp(twice.data().data(), m.data().data(), m.data().size() * sizeof(float)) == 0);
  CHECK(read_text_file(dir / "a.npy") == read_text_file(dir / "b.npy"));
  CHECK(read_text_file(dir / "a.ids.txt") == read_text_file(dir / "b.ids.txt"));
  CHECK(matrix_path_for(dir / "a") == dir / "a.npy");
  CHECK(ids_path_for(dir / "a") == dir / "a.ids.txt");
}

TEST_CASE("select keeps the requested order") {
  const EmbeddingMatrix m({"a", "b", "c"}, {1, 2, 3}, 1);
  const std::vector<std::size_t> rows{2, 0};
  const auto s = m.select(rows);
  CHECK(s.ids() == std::vector<std::string>{"c", "a"});
  CHECK(s.row(0)[0] == 3.0f);
  CHECK(s.find("a") == 1);
}
