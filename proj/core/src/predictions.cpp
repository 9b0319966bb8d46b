#include "chronolens/predictions.hpp"

#include "chronolens/csv.hpp"
#include "chronolens/error.hpp"
#include "chronolens/util.hpp"

namespace chronolens {

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

void attach_actual_years(std::span<DatePrediction> predictions,
                         const std::unordered_map<std::string, int>& years) {
  for (auto& p : predictions) {
    const auto it = years.find(p.image_id);
    if (it != years.end()) p.actual_year = it->second;
  }
}

std::string format_predictions(std::span<const DatePrediction> predictions) {
  std::string out = "image_id,actual_year,predicted_year,signed_error\n";
  for (const auto& p : predictions) {
    const auto err = p.signed_error();
    out += csv::format_row({p.image_id,
                            p.actual_year ? std::to_string(*p.actual_year) : "",
                            std::to_string(p.predicted_year),
                            err ? std::to_string(*err) : ""});
  }
  return out;
}

void write_predictions(const std::filesystem::path& path,
                       std::span<const DatePrediction> predictions) {
  write_text_file(path, format_predictions(predictions));
}

std::vector<DatePrediction> read_predictions(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  if (table.header !=
      csv::Row{"image_id", "actual_year", "predicted_year", "signed_error"}) {
    throw DataError(path.string() +
                    ": header must be `image_id,actual_year,predicted_year,signed_error`");
  }
  std::vector<DatePrediction> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto where = path.string() + " line " + std::to_string(table.lines[r]);
    if (row.size() != 4) throw DataError(where + ": expected 4 fields");
    DatePrediction p;
    p.image_id = row[0];
    if (!row[1].empty()) {
      const auto actual = parse_int(row[1]);
      if (!actual) throw DataError(where + ": bad actual_year '" + row[1] + "'");
      p.actual_year = static_cast<int>(*actual);
    }
    const auto predicted = parse_int(row[2]);
    if (!predicted) throw DataError(where + ": bad predicted_year '" + row[2] + "'");
    p.predicted_year = static_cast<int>(*predicted);
    if (p.signed_error() && row[3] != std::to_string(*p.signed_error())) {
      throw DataError(where + ": signed_error disagrees with the years");
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace chronolens
