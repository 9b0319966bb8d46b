#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace chronolens {

// Row-aligned float32 embeddings keyed by id. Immutable once constructed.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;

  // Throws DataError when ids.size() * dim != data.size(), dim == 0, an id is
  // duplicated, or any entry is NaN/Inf.
  EmbeddingMatrix(std::vector<std::string> ids, std::vector<float> data,
                  std::size_t dim, bool normalized = false);

  std::size_t rows() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }
  bool normalized() const { return normalized_; }

  const std::vector<std::string>& ids() const { return ids_; }
  std::span<const float> data() const { return data_; }
  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }

  std::optional<std::size_t> find(const std::string& id) const;

  // New matrix holding the listed rows, in the given order.
  EmbeddingMatrix select(std::span<const std::size_t> rows) const;

 private:
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::size_t dim_ = 0;
  bool normalized_ = false;
  std::unordered_map<std::string, std::size_t> index_;
};

// `matrix_path` is an NPY v1.0 '<f4' (N, D) array; `ids_path` holds N lines.
EmbeddingMatrix load_embeddings(const std::filesystem::path& matrix_path,
                                const std::filesystem::path& ids_path);

// `<stem>.npy` + `<stem>.ids.txt`.
EmbeddingMatrix load_embedding_pair(const std::filesystem::path& stem);
void write_embedding_pair(const std::filesystem::path& stem,
                          const EmbeddingMatrix& m);

std::filesystem::path matrix_path_for(const std::filesystem::path& stem);
std::filesystem::path ids_path_for(const std::filesystem::path& stem);

// Norms and the division are carried out in double. Rows with norm below
// 1e-12 are a DataError naming the row.
EmbeddingMatrix l2_normalize(const EmbeddingMatrix& m);

double dot(std::span<const float> a, std::span<const float> b);
double norm(std::span<const float> a);
double cosine_similarity(std::span<const float> a, std::span<const float> b);

}  // namespace chronolens
