#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace cubemix {

// One output row: ordered (column, preformatted value) pairs.  Numeric
// formatting is centralized here so reruns are byte-identical.
class ResultRow {
 public:
  ResultRow& add(const std::string& col, const std::string& v) {
    cells_.emplace_back(col, v);
    return *this;
  }
  ResultRow& add(const std::string& col, const char* v) {
    return add(col, std::string(v));
  }
  ResultRow& add(const std::string& col, std::int64_t v) {
    return add(col, std::to_string(v));
  }
  ResultRow& add(const std::string& col, double v) {
    if (std::isinf(v)) return add(col, v > 0 ? "inf" : "-inf");
    if (std::isnan(v)) return add(col, "nan");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return add(col, std::string(buf));
  }
  ResultRow& add(const std::string& col, bool v) { return add(col, v ? "1" : "0"); }

  const std::vector<std::pair<std::string, std::string>>& cells() const { return cells_; }

 private:
  std::vector<std::pair<std::string, std::string>> cells_;
};

// RFC 4180: quote fields containing commas, quotes, or line breaks; double
// embedded quotes.
inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

inline void write_csv(std::ostream& os, const std::vector<std::string>& columns,
                      const std::vector<ResultRow>& rows) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << csv_escape(columns[i]);
  }
  os << "\r\n";
  for (const ResultRow& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) os << ',';
      std::string v;
      for (const auto& [c, cell] : row.cells())
        if (c == columns[i]) {
          v = cell;
          break;
        }
      os << csv_escape(v);
    }
    os << "\r\n";
  }
}

}  // namespace cubemix
