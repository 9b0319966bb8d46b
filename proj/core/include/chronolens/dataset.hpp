#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace chronolens {

inline constexpr int kFirstYear = 1950;
inline constexpr int kLastYear = 1999;

enum class Split { unassigned, train, test };

std::string_view to_string(Split split);

struct PhotoRecord {
  std::string image_id;
  int year = 0;
  std::string scene;  // empty when the manifest has no label
  Split split = Split::unassigned;

  bool operator==(const PhotoRecord&) const = default;
};

struct RejectedRow {
  std::size_t line = 0;
  std::string image_id;
  std::string reason;
};

struct Manifest {
  std::vector<PhotoRecord> records;
  std::vector<RejectedRow> rejected;
};

struct SplitConfig {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

// Reads a `image_id,year,scene` CSV. Rows with a missing or non-numeric year
// land in Manifest::rejected. A duplicate image_id is a DataError naming it.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(std::string_view text);

std::vector<PhotoRecord> filter_year_range(std::span<const PhotoRecord> records,
                                           int min_year, int max_year);

// Per year, round(n * test_fraction) records (half away from zero) go to test
// and the rest to train. Years with one record always go to train.
//
// Within a year, ids are sorted before a seeded std::mt19937_64 shuffle, so
// the assignment does not depend on manifest row order.
std::vector<PhotoRecord> stratified_split(std::span<const PhotoRecord> records,
                                          const SplitConfig& config);

// `image_id,split` CSV in record order; unassigned records are skipped.
std::string format_split(std::span<const PhotoRecord> records);
void write_split(const std::filesystem::path& path,
                 std::span<const PhotoRecord> records);

using SplitMap = std::unordered_map<std::string, Split>;
SplitMap read_split(const std::filesystem::path& path);

// Copies split assignments onto records; ids absent from the map stay
// unassigned.
void apply_split(std::span<PhotoRecord> records, const SplitMap& split);

}  // namespace chronolens
