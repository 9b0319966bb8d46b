#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace chronolens::csv {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;
  // 1-based line number in the source file where each row starts.
  std::vector<std::size_t> lines;
};

// RFC 4180 parsing: quoted fields may contain commas, doubled quotes and
// line breaks. Accepts LF or CRLF line endings and a leading UTF-8 BOM.
// Blank lines are skipped.
Table parse(std::string_view text);

// Throws DataError if the file cannot be opened.
Table read_file(const std::filesystem::path& path);

// Quotes a field only when it contains a comma, quote or line break.
std::string escape(std::string_view field);

std::string format_row(const Row& row);

}  // namespace chronolens::csv
