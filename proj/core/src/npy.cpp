#include "chronolens/npy.hpp"

#include <bit>
#include <cstring>
#include <numeric>
#include <regex>
#include <string_view>

#include "chronolens/error.hpp"
#include "chronolens/util.hpp"

static_assert(std::endian::native == std::endian::little,
              "NPY I/O assumes a little-endian host");

namespace chronolens::npy {

namespace {

constexpr std::string_view kMagic = "\x93NUMPY";

template <typename T>
constexpr std::string_view descr();
template <>
constexpr std::string_view descr<float>() { return "<f4"; }
template <>
constexpr std::string_view descr<double>() { return "<f8"; }

std::string shape_text(const std::vector<std::size_t>& shape) {
  std::string out = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(shape[i]);
  }
  if (shape.size() == 1) out += ",";
  out += ")";
  return out;
}

std::string header_field(const std::string& header, const std::string& key,
                         const std::string& origin) {
  // Values are either quoted strings, booleans or a parenthesized tuple.
  const std::regex re("['\"]" + key + "['\"]\\s*:\\s*('[^']*'|\"[^\"]*\"|True|False|\\([^)]*\\))");
  std::smatch m;
  if (!std::regex_search(header, m, re)) {
    throw DataError(origin + ": NPY header lacks '" + key + "'");
  }
  return m[1].str();
}

}  // namespace

template <typename T>
std::size_t Array<T>::size() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

template <typename T>
std::string encode(const Array<T>& array) {
  if (array.size() != array.data.size()) {
    throw std::invalid_argument("npy::encode: shape does not match data size");
  }
  std::string dict = "{'descr': '" + std::string(descr<T>()) +
                     "', 'fortran_order': False, 'shape': " +
                     shape_text(array.shape) + ", }";
  // magic(6) + version(2) + header_len(2) + dict + padding + '\n' is a
  // multiple of 64.
  const std::size_t unpadded = kMagic.size() + 2 + 2 + dict.size() + 1;
  const std::size_t padding = (64 - unpadded % 64) % 64;
  dict.append(padding, ' ');
  dict.push_back('\n');
  if (dict.size() > 0xffff) throw std::invalid_argument("npy header too long");

  std::string out;
  out.reserve(10 + dict.size() + array.data.size() * sizeof(T));
  out += kMagic;
  out.push_back('\x01');
  out.push_back('\x00');
  out.push_back(static_cast<char>(dict.size() & 0xff));
  out.push_back(static_cast<char>((dict.size() >> 8) & 0xff));
  out += dict;
  const auto* bytes = reinterpret_cast<const char*>(array.data.data());
  out.append(bytes, array.data.size() * sizeof(T));
  return out;
}

template <typename T>
Array<T> decode(const std::string& bytes, const std::string& origin) {
  if (bytes.size() < 10 || std::string_view(bytes).substr(0, 6) != kMagic) {
    throw DataError(origin + ": not an NPY file");
  }
  const auto major = static_cast<unsigned char>(bytes[6]);
  std::size_t header_len = 0;
  std::size_t offset = 0;
  if (major == 1) {
    header_len = static_cast<unsigned char>(bytes[8]) |
                 (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
    offset = 10;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) throw DataError(origin + ": truncated NPY header");
    for (int i = 0; i < 4; ++i) {
      header_len |= static_cast<std::size_t>(static_cast<unsigned char>(bytes[8 + i]))
                    << (8 * i);
    }
    offset = 12;
  } else {
    throw DataError(origin + ": unsupported NPY version " + std::to_string(major));
  }
  if (bytes.size() < offset + header_len) {
    throw DataError(origin + ": truncated NPY header");
  }
  const std::string header = bytes.substr(offset, header_len);

  const auto dtype = header_field(header, "descr", origin);
  const std::string dtype_value = dtype.substr(1, dtype.size() - 2);
  if (dtype_value != descr<T>()) {
    throw DataError(origin + ": dtype " + dtype_value + ", expected " +
                    std::string(descr<T>()));
  }
  if (header_field(header, "fortran_order", origin) != "False") {
    throw DataError(origin + ": Fortran-ordered arrays are not supported");
  }

  Array<T> array;
  const auto shape = header_field(header, "shape", origin);
  const std::string inner = shape.substr(1, shape.size() - 2);
  std::size_t pos = 0;
  while (pos < inner.size()) {
    const auto comma = inner.find(',', pos);
    const auto token = trim(inner.substr(pos, comma == std::string::npos
                                                  ? std::string::npos
                                                  : comma - pos));
    if (!token.empty()) {
      auto v = parse_int(token);
      if (!v || *v < 0) throw DataError(origin + ": bad shape " + shape);
      array.shape.push_back(static_cast<std::size_t>(*v));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }

  const std::size_t count = array.size();
  const std::size_t data_offset = offset + header_len;
  if (bytes.size() - data_offset != count * sizeof(T)) {
    throw DataError(origin + ": payload is " +
                    std::to_string(bytes.size() - data_offset) + " bytes, expected " +
                    std::to_string(count * sizeof(T)));
  }
  array.data.resize(count);
  std::memcpy(array.data.data(), bytes.data() + data_offset, count * sizeof(T));
  return array;
}

template <typename T>
Array<T> read(const std::filesystem::path& path) {
  return decode<T>(read_text_file(path), path.string());
}

template <typename T>
void write(const std::filesystem::path& path, const Array<T>& array) {
  write_text_file(path, encode(array));
}

template struct Array<float>;
template struct Array<double>;
template std::string encode(const Array<float>&);
template std::string encode(const Array<double>&);
template Array<float> decode(const std::string&, const std::string&);
template Array<double> decode(const std::string&, const std::string&);
template Array<float> read(const std::filesystem::path&);
template Array<double> read(const std::filesystem::path&);
template void write(const std::filesystem::path&, const Array<float>&);
template void write(const std::filesystem::path&, const Array<double>&);

}  // namespace chronolens::npy
