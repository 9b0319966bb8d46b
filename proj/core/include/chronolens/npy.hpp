#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace chronolens::npy {

// A dense C-order array as stored in an NPY v1.0 file.
template <typename T>
struct Array {
  std::vector<std::size_t> shape;
  std::vector<T> data;

  std::size_t size() const;
};

// Supported element types: float ('<f4') and double ('<f8'). Reading
// rejects any other dtype, big-endian data and Fortran order.
template <typename T>
Array<T> read(const std::filesystem::path& path);

template <typename T>
void write(const std::filesystem::path& path, const Array<T>& array);

// Serialized bytes, exposed for tests of the header layout.
template <typename T>
std::string encode(const Array<T>& array);

template <typename T>
Array<T> decode(const std::string& bytes, const std::string& origin);

}  // namespace chronolens::npy
