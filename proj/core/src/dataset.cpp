#include "chronolens/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "chronolens/csv.hpp"
#include "chronolens/error.hpp"
#include "chronolens/util.hpp"

namespace chronolens {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train:
      return "train";
    case Split::test:
      return "test";
    case Split::unassigned:
      break;
  }
  return "unassigned";
}

Manifest parse_manifest(std::string_view text) {
  const auto table = csv::parse(text);
  const csv::Row expected{"image_id", "year", "scene"};
  if (table.header != expected) {
    throw DataError("manifest header must be `image_id,year,scene`");
  }

  Manifest manifest;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = table.lines[r];
    if (row.size() > table.header.size()) {
      throw DataError("manifest line " + std::to_string(line) + ": " +
                      std::to_string(row.size()) + " fields, expected " +
                      std::to_string(table.header.size()));
    }
    const auto field = [&](std::size_t i) {
      return i < row.size() ? trim(row[i]) : std::string{};
    };
    auto id = field(0);
    if (id.empty()) {
      manifest.rejected.push_back({line, id, "missing image_id"});
      continue;
    }
    if (!seen.insert(id).second) {
      throw DataError("duplicate image_id " + id + " at manifest line " +
                      std::to_string(line));
    }
    const auto year_text = field(1);
    if (year_text.empty()) {
      manifest.rejected.push_back({line, id, "missing year"});
      continue;
    }
    const auto year = parse_int(year_text);
    if (!year || year_text.size() != 4) {
      manifest.rejected.push_back({line, id, "unparseable year '" + year_text + "'"});
      continue;
    }
    manifest.records.push_back(
        {std::move(id), static_cast<int>(*year), field(2), Split::unassigned});
  }
  return manifest;
}

Manifest load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw DataError("missing manifest " + path.string());
  }
  return parse_manifest(read_text_file(path));
}

std::vector<PhotoRecord> filter_year_range(std::span<const PhotoRecord> records,
                                           int min_year, int max_year) {
  if (min_year > max_year) {
    throw std::invalid_argument("filter_year_range: min_year > max_year");
  }
  std::vector<PhotoRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const PhotoRecord& r) {
                 return r.year >= min_year && r.year <= max_year;
               });
  return out;
}

std::vector<PhotoRecord> stratified_split(std::span<const PhotoRecord> records,
                                          const SplitConfig& config) {
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must lie in (0, 1)");
  }

  std::map<int, std::vector<std::size_t>> by_year;
  for (std::size_t i = 0; i < records.size(); ++i) {
    by_year[records[i].year].push_back(i);
  }

  std::vector<PhotoRecord> out(records.begin(), records.end());
  std::mt19937_64 rng(config.seed);
  for (auto& [year, members] : by_year) {
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return records[a].image_id < records[b].image_id;
    });
    const auto n = members.size();
    std::size_t n_test = 0;
    if (n >= 2) {
      // Nudge so products like 12.5 computed as 12.4999... still round up.
      n_test = static_cast<std::size_t>(
          std::floor(static_cast<double>(n) * config.test_fraction + 0.5 + 1e-9));
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t j = 0; j < n; ++j) {
      out[members[j]].split = j < n_test ? Split::test : Split::train;
    }
  }
  return out;
}

std::string format_split(std::span<const PhotoRecord> records) {
  std::string out = "image_id,split\n";
  for (const auto& r : records) {
    if (r.split == Split::unassigned) continue;
    out += csv::format_row({r.image_id, std::string(to_string(r.split))});
  }
  return out;
}

void write_split(const std::filesystem::path& path,
                 std::span<const PhotoRecord> records) {
  write_text_file(path, format_split(records));
}

SplitMap read_split(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  if (table.header != csv::Row{"image_id", "split"}) {
    throw DataError(path.string() + ": header must be `image_id,split`");
  }
  SplitMap out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != 2) {
      throw DataError(path.string() + " line " + std::to_string(table.lines[r]) +
                      ": expected 2 fields");
    }
    Split s;
    if (row[1] == "train") {
      s = Split::train;
    } else if (row[1] == "test") {
      s = Split::test;
    } else {
      throw DataError(path.string() + " line " + std::to_string(table.lines[r]) +
                      ": split must be train or test, got '" + row[1] + "'");
    }
    if (!out.emplace(row[0], s).second) {
      throw DataError(path.string() + ": duplicate image_id " + row[0]);
    }
  }
  return out;
}

void apply_split(std::span<PhotoRecord> records, const SplitMap& split) {
  for (auto& r : records) {
    const auto it = split.find(r.image_id);
    r.split = it == split.end() ? Split::unassigned : it->second;
  }
}

}  // namespace chronolens
