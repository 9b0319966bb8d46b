#include "chronolens/csv.hpp"

#include "chronolens/error.hpp"
#include "chronolens/util.hpp"

namespace chronolens::csv {

Table parse(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  Table table;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // distinguishes "" from an absent row
  std::size_t line = 1;
  std::size_t row_line = 1;

  auto end_row = [&] {
    if (row.empty() && !field_started && field.empty()) return;  // blank line
    row.push_back(std::move(field));
    field.clear();
    if (table.header.empty() && table.rows.empty() && table.lines.empty()) {
      table.header = std::move(row);
      table.lines.push_back(row_line);
    } else {
      table.rows.push_back(std::move(row));
      table.lines.push_back(row_line);
    }
    row.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        row_line = line;
        break;
      default:
        if (row.empty() && !field_started && field.empty()) row_line = line;
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field starting near line " +
                                 std::to_string(row_line));
  end_row();
  // The header's line entry is not part of the per-row list.
  if (!table.lines.empty()) table.lines.erase(table.lines.begin());
  return table;
}

Table read_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("missing file " + path.string());
  return parse(read_text_file(path));
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_row(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(row[i]);
  }
  out.push_back('\n');
  return out;
}

}  // namespace chronolens::csv
