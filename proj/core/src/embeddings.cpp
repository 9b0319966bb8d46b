#include "chronolens/embeddings.hpp"

#include <cmath>
#include <sstream>

#include "chronolens/error.hpp"
#include "chronolens/npy.hpp"
#include "chronolens/util.hpp"

namespace chronolens {

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> ids,
                                 std::vector<float> data, std::size_t dim,
                                 bool normalized)
    : ids_(std::move(ids)), data_(std::move(data)), dim_(dim),
      normalized_(normalized) {
  if (dim_ == 0) throw DataError("embedding dimension must be at least 1");
  if (ids_.size() * dim_ != data_.size()) {
    throw DataError("embedding matrix has " + std::to_string(data_.size() / dim_) +
                    " rows but " + std::to_string(ids_.size()) + " ids");
  }
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw DataError("duplicate embedding id " + ids_[i]);
    }
    for (float v : row(i)) {
      if (!std::isfinite(v)) {
        throw DataError("non-finite embedding value in row " + std::to_string(i) +
                        " (id " + ids_[i] + ")");
      }
    }
  }
}

std::optional<std::size_t> EmbeddingMatrix::find(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingMatrix EmbeddingMatrix::select(std::span<const std::size_t> rows) const {
  std::vector<std::string> ids;
  std::vector<float> data;
  ids.reserve(rows.size());
  data.reserve(rows.size() * dim_);
  for (auto r : rows) {
    ids.push_back(ids_.at(r));
    const auto src = row(r);
    data.insert(data.end(), src.begin(), src.end());
  }
  return EmbeddingMatrix(std::move(ids), std::move(data), dim_, normalized_);
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& matrix_path,
                                const std::filesystem::path& ids_path) {
  if (!std::filesystem::exists(matrix_path)) {
    throw DataError("missing embedding matrix " + matrix_path.string());
  }
  if (!std::filesystem::exists(ids_path)) {
    throw DataError("missing embedding ids " + ids_path.string());
  }
  auto array = npy::read<float>(matrix_path);
  if (array.shape.size() != 2) {
    throw DataError(matrix_path.string() + ": expected a 2-d array, got " +
                    std::to_string(array.shape.size()) + "-d");
  }

  std::vector<std::string> ids;
  std::istringstream in(read_text_file(ids_path));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      throw DataError(ids_path.string() + ": empty id on line " +
                      std::to_string(ids.size() + 1));
    }
    ids.push_back(std::move(line));
  }
  if (ids.size() != array.shape[0]) {
    throw DataError(matrix_path.string() + " has " + std::to_string(array.shape[0]) +
                    " rows but " + ids_path.string() + " has " +
                    std::to_string(ids.size()) + " ids");
  }
  return EmbeddingMatrix(std::move(ids), std::move(array.data), array.shape[1]);
}

std::filesystem::path matrix_path_for(const std::filesystem::path& stem) {
  auto p = stem;
  p += ".npy";
  return p;
}

std::filesystem::path ids_path_for(const std::filesystem::path& stem) {
  auto p = stem;
  p += ".ids.txt";
  return p;
}

EmbeddingMatrix load_embedding_pair(const std::filesystem::path& stem) {
  return load_embeddings(matrix_path_for(stem), ids_path_for(stem));
}

void write_embedding_pair(const std::filesystem::path& stem,
                          const EmbeddingMatrix& m) {
  npy::Array<float> array{{m.rows(), m.dim()},
                          {m.data().begin(), m.data().end()}};
  npy::write(matrix_path_for(stem), array);
  std::string ids;
  for (const auto& id : m.ids()) {
    ids += id;
    ids.push_back('\n');
  }
  write_text_file(ids_path_for(stem), ids);
}

double dot(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

double norm(std::span<const float> a) { return std::sqrt(dot(a, a)); }

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  return dot(a, b) / (norm(a) * norm(b));
}

EmbeddingMatrix l2_normalize(const EmbeddingMatrix& m) {
  std::vector<float> data(m.data().begin(), m.data().end());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double n = norm(m.row(i));
    if (n < 1e-12) {
      throw DataError("cannot normalize zero-norm embedding row " +
                      std::to_string(i) + " (id " + m.ids()[i] + ")");
    }
    for (std::size_t d = 0; d < m.dim(); ++d) {
      auto& v = data[i * m.dim() + d];
      v = static_cast<float>(static_cast<double>(v) / n);
    }
  }
  return EmbeddingMatrix(m.ids(), std::move(data), m.dim(), true);
}

}  // namespace chronolens
