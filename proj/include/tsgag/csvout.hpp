#pragma once

#include <string>
#include <variant>
#include <vector>

namespace tsgag {

/// CSV cell: numbers are serialized with 17 significant digits so runs are
/// byte-reproducible and round-trip exactly.
using CsvCell = std::variant<std::string, double, long long, bool>;

std::string csv_format(const CsvCell& cell);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<CsvCell> row);
  std::string to_string() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

}  // namespace tsgag
