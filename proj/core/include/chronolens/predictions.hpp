#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace chronolens {

struct DatePrediction {
  std::string image_id;
  std::optional<int> actual_year;
  int predicted_year = 0;
  std::vector<double> scores;  // one per candidate year, same order

  std::optional<int> signed_error() const {
    if (!actual_year) return std::nullopt;
    return predicted_year - *actual_year;
  }
};

// Index of the maximum; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

void attach_actual_years(std::span<DatePrediction> predictions,
                         const std::unordered_map<std::string, int>& years);

// `image_id,actual_year,predicted_year,signed_error`; scores are not stored.
std::string format_predictions(std::span<const DatePrediction> predictions);
void write_predictions(const std::filesystem::path& path,
                       std::span<const DatePrediction> predictions);
std::vector<DatePrediction> read_predictions(const std::filesystem::path& path);

}  // namespace chronolens
