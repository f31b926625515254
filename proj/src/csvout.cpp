#include "tsgag/csvout.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tsgag/errors.hpp"

namespace tsgag {

std::string csv_format(const CsvCell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) {
    // Quote only when needed; scenario ids and notes stay plain otherwise.
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string quoted = "\"";
    for (char c : *s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    return quoted;
  }
  if (const auto* d = std::get_if<double>(&cell)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", *d);
    return buf;
  }
  if (const auto* i = std::get_if<long long>(&cell)) {
    return std::to_string(*i);
  }
  return std::get<bool>(cell) ? "1" : "0";
}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != header_.size()) {
    fail(ErrorCode::DomainError, "CSV row width does not match header");
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out << ',';
    out << header_[i];
  }
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_format(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::DomainError, "cannot open " + path + " for writing");
  out << to_string();
}

}  // namespace tsgag
