#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace chronolens {

// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

// Parses a full string as an integer; nullopt on any trailing garbage.
std::optional<long long> parse_int(std::string_view text);
std::optional<double> parse_double(std::string_view text);

std::string trim(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

// Writes through a temporary file then renames, so readers never see a
// partially written artifact.
void write_text_file(const std::filesystem::path& path, std::string_view content);

// 64-bit FNV-1a, used for dataset fingerprints.
class Fnv1a {
 public:
  void update(std::span<const std::byte> bytes);
  void update(std::string_view text);
  std::uint64_t digest() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace chronolens
