#include "chronolens/object_features.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "chronolens/csv.hpp"
#include "chronolens/error.hpp"
#include "chronolens/util.hpp"

namespace chronolens {

const std::vector<std::string>& default_focus_classes() {
  static const std::vector<std::string> classes{
      "bicycle", "boat", "bus",  "car", "motorcycle", "train",
      "truck",   "bird", "cat",  "dog", "horse",      "person"};
  return classes;
}

std::vector<std::uint8_t> PresenceMatrix::column(std::size_t c) const {
  std::vector<std::uint8_t> out(rows());
  for (std::size_t i = 0; i < rows(); ++i) out[i] = at(i, c);
  return out;
}

DetectionSet parse_detections(std::string_view text) {
  const auto table = csv::parse(text);
  const csv::Row expected{"image_id", "label", "confidence", "x1", "y1", "x2", "y2"};
  if (table.header != expected) {
    throw DataError("detections header must be `image_id,label,confidence,x1,y1,x2,y2`");
  }
  DetectionSet set;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = table.lines[r];
    if (row.size() != expected.size()) {
      set.rejected.push_back({line, "expected 7 fields, got " + std::to_string(row.size())});
      continue;
    }
    DetectionRecord d;
    d.image_id = trim(row[0]);
    d.label = trim(row[1]);
    if (d.image_id.empty() || d.label.empty()) {
      set.rejected.push_back({line, "missing image_id or label"});
      continue;
    }
    const auto conf = parse_double(trim(row[2]));
    if (!conf) {
      set.rejected.push_back({line, "unparseable confidence '" + row[2] + "'"});
      continue;
    }
    if (!(*conf >= 0.0 && *conf <= 1.0)) {
      set.rejected.push_back({line, "confidence " + row[2] + " outside [0, 1]"});
      continue;
    }
    d.confidence = *conf;

    std::size_t filled = 0;
    std::array<double, 4> box{};
    bool bad = false;
    for (std::size_t k = 0; k < 4; ++k) {
      const auto cell = trim(row[3 + k]);
      if (cell.empty()) continue;
      ++filled;
      const auto v = parse_double(cell);
      if (!v) bad = true;
      else box[k] = *v;
    }
    if (bad || (filled != 0 && filled != 4)) {
      set.rejected.push_back({line, "incomplete or unparseable bbox"});
      continue;
    }
    if (filled == 4) d.bbox = box;
    set.records.push_back(std::move(d));
  }
  return set;
}

DetectionSet load_detections(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("missing detections " + path.string());
  return parse_detections(read_text_file(path));
}

PresenceResult build_presence(std::span<const DetectionRecord> detections,
                              std::span<const std::string> image_ids,
                              const FilterConfig& config) {
  if (image_ids.empty()) throw std::invalid_argument("build_presence: no image ids");
  if (!(config.confidence_threshold > 0.0 && config.confidence_threshold < 1.0)) {
    throw std::invalid_argument("confidence_threshold must lie in (0, 1)");
  }

  std::vector<const DetectionRecord*> confident;
  for (const auto& d : detections) {
    if (d.confidence > config.confidence_threshold) confident.push_back(&d);
  }

  std::map<std::string, std::size_t> counts;
  if (config.count_mode == ClassCountMode::detections) {
    for (const auto* d : confident) ++counts[d->label];
  } else {
    std::map<std::string, std::unordered_set<std::string>> images;
    for (const auto* d : confident) images[d->label].insert(d->image_id);
    for (const auto& [label, ids] : images) counts[label] = ids.size();
  }

  PresenceResult result;
  result.class_counts.assign(counts.begin(), counts.end());
  auto& m = result.matrix;
  m.provenance = config;
  m.image_ids.assign(image_ids.begin(), image_ids.end());
  for (const auto& c : config.focus_classes) {
    const auto it = counts.find(c);
    if (it != counts.end() && it->second > config.min_class_count &&
        std::find(m.classes.begin(), m.classes.end(), c) == m.classes.end()) {
      m.classes.push_back(c);
    }
  }

  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < m.image_ids.size(); ++i) {
    if (!row_of.emplace(m.image_ids[i], i).second) {
      throw std::invalid_argument("build_presence: duplicate image id " + m.image_ids[i]);
    }
  }
  std::unordered_map<std::string, std::size_t> col_of;
  for (std::size_t c = 0; c < m.classes.size(); ++c) col_of.emplace(m.classes[c], c);

  m.presence.assign(m.image_ids.size() * m.classes.size(), 0);
  for (const auto* d : confident) {
    const auto r = row_of.find(d->image_id);
    const auto c = col_of.find(d->label);
    if (r == row_of.end() || c == col_of.end()) continue;
    m.presence[r->second * m.classes.size() + c->second] = 1;
  }

  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    bool any = false;
    for (std::size_t i = 0; i < m.rows() && !any; ++i) any = m.at(i, c) != 0;
    if (!any) {
      result.warnings.push_back("class '" + m.classes[c] +
                                "' passed the filters but is absent from every "
                                "listed image; keeping an all-zero column");
    }
  }
  return result;
}

std::string format_presence(const PresenceMatrix& m) {
  csv::Row header{"image_id"};
  header.insert(header.end(), m.classes.begin(), m.classes.end());
  std::string out = csv::format_row(header);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    csv::Row row{m.image_ids[i]};
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(i, c) ? "1" : "0");
    out += csv::format_row(row);
  }
  return out;
}

void write_presence(const std::filesystem::path& path, const PresenceMatrix& m) {
  write_text_file(path, format_presence(m));
}

PresenceMatrix read_presence(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  if (table.header.empty() || table.header[0] != "image_id") {
    throw DataError(path.string() + ": presence header must start with image_id");
  }
  PresenceMatrix m;
  m.classes.assign(table.header.begin() + 1, table.header.end());
  m.provenance.focus_classes = m.classes;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size()) {
      throw DataError(path.string() + " line " + std::to_string(table.lines[r]) +
                      ": wrong field count");
    }
    m.image_ids.push_back(row[0]);
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c] != "0" && row[c] != "1") {
        throw DataError(path.string() + " line " + std::to_string(table.lines[r]) +
                        ": presence entries must be 0 or 1");
      }
      m.presence.push_back(row[c] == "1" ? 1 : 0);
    }
  }
  return m;
}

}  // namespace chronolens
