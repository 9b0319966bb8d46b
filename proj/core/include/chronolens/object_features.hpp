#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chronolens {

struct DetectionRecord {
  std::string image_id;
  std::string label;
  double confidence = 0.0;
  std::optional<std::array<double, 4>> bbox;  // x1, y1, x2, y2
};

struct RejectedDetection {
  std::size_t line = 0;
  std::string reason;
};

struct DetectionSet {
  std::vector<DetectionRecord> records;
  std::vector<RejectedDetection> rejected;
};

// Modes of transport and living beings from the COCO-80 vocabulary.
const std::vector<std::string>& default_focus_classes();

enum class ClassCountMode { detections, images };

struct FilterConfig {
  double confidence_threshold = 0.8;  // a detection survives if conf > this
  std::size_t min_class_count = 200;  // a class survives if count > this
  std::vector<std::string> focus_classes = default_focus_classes();
  ClassCountMode count_mode = ClassCountMode::detections;
};

struct PresenceMatrix {
  std::vector<std::string> image_ids;
  std::vector<std::string> classes;
  std::vector<std::uint8_t> presence;  // N x C, row-major, 0/1
  FilterConfig provenance;

  std::size_t rows() const { return image_ids.size(); }
  std::size_t cols() const { return classes.size(); }
  std::uint8_t at(std::size_t i, std::size_t c) const {
    return presence[i * classes.size() + c];
  }
  std::vector<std::uint8_t> column(std::size_t c) const;
};

struct PresenceResult {
  PresenceMatrix matrix;
  std::vector<std::string> warnings;
  // Surviving detection (or image) counts per class after the confidence cut.
  std::vector<std::pair<std::string, std::size_t>> class_counts;
};

// `image_id,label,confidence,x1,y1,x2,y2`; bbox columns may all be empty.
// Rows with confidence outside [0, 1] or a partial bbox are rejected.
DetectionSet load_detections(const std::filesystem::path& path);
DetectionSet parse_detections(std::string_view text);

// 1) keep confidence > threshold; 2) count per class over all detections and
// keep count > min_class_count; 3) intersect with focus_classes in focus
// order; 4) binarize per image. A retained class with no presence among
// `image_ids` keeps an all-zero column and produces a warning.
PresenceResult build_presence(std::span<const DetectionRecord> detections,
                              std::span<const std::string> image_ids,
                              const FilterConfig& config);

// `image_id,<class1>,...,<classC>` with 0/1 entries.
std::string format_presence(const PresenceMatrix& m);
void write_presence(const std::filesystem::path& path, const PresenceMatrix& m);
PresenceMatrix read_presence(const std::filesystem::path& path);

}  // namespace chronolens
