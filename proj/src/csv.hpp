#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "panelcp/error.hpp"

namespace panelcp::detail {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row
};

inline std::vector<std::string> split_csv_line(std::string_view line, std::string_view source,
                                               std::size_t lineno) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"' && cell.empty()) {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) {
    throw Error(Errc::ParseError, std::string(source) + ":" + std::to_string(lineno) + ": unterminated quote");
  }
  cells.push_back(std::move(cell));
  return cells;
}

inline CsvTable read_csv(std::istream& in, std::string_view source) {
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line, source, lineno);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw Error(Errc::ParseError, std::string(source) + ":" + std::to_string(lineno) + ": expected " +
                                        std::to_string(table.header.size()) + " fields, found " +
                                        std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
    table.lines.push_back(lineno);
  }
  if (table.header.empty()) throw Error(Errc::ParseError, std::string(source) + ": missing header row");
  return table;
}

/// Empty (or all-blank) cell is nullopt; anything else must be a finite number.
inline std::optional<double> parse_cell(std::string_view cell) {
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || end != cell.data() + cell.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a number: '" + std::string(cell) + "'");
  }
  return v;
}

}  // namespace panelcp::detail
