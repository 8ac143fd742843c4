#pragma once

#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "levysd/errors.hpp"

namespace levysd {

// Reader for the comma-separated files this project emits: one header line,
// numeric cells, "nan" for undefined entries.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return static_cast<int>(i);
    throw DomainError("csv column not found: " + name);
  }
};

inline CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw DomainError("empty csv");
  {
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  }
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      if (cell == "nan") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
    if (row.size() != table.columns.size())
      throw DomainError("csv row " + std::to_string(lineno) + " has " +
                        std::to_string(row.size()) + " cells, expected " +
                        std::to_string(table.columns.size()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace levysd
