#pragma once

// Curve tables as CSV: header `l,<measure>...`, one row per l from 0.

#include <cstdio>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "anatomy/block_analysis.hpp"

namespace anatomy {

inline std::string format_number(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);  // no "-0.000000"
  return s;
}

inline std::string curves_to_csv(const std::vector<BlockCurve>& curves, int precision = 6) {
  if (curves.empty()) throw std::invalid_argument("curves_to_csv: no curves");
  const std::size_t rows = curves.front().values.size();
  std::string out = "l";
  for (const auto& c : curves) {
    if (c.values.size() != rows) throw std::invalid_argument("curves_to_csv: curves differ in length");
    out += ",";
    out += block_measure_name(c.measure);
  }
  out += "\n";
  for (std::size_t l = 0; l < rows; ++l) {
    out += std::to_string(l);
    for (const auto& c : curves) out += "," + format_number(c.values[l], precision);
    out += "\n";
  }
  return out;
}

inline std::vector<BlockCurve> curves_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("curves_from_csv: empty input");
  std::vector<BlockCurve> curves;
  {
    std::istringstream header(line);
    std::string cell;
    std::getline(header, cell, ',');
    if (cell != "l") throw std::invalid_argument("curves_from_csv: header must start with 'l'");
    while (std::getline(header, cell, ',')) curves.push_back({parse_block_measure(cell), {}});
  }
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    std::size_t l = 0;
    char comma = 0;
    row >> l;
    if (!row || l != expected) throw std::invalid_argument("curves_from_csv: bad row index");
    for (auto& c : curves) {
      double v = 0.0;
      row >> comma >> v;
      if (!row || comma != ',') throw std::invalid_argument("curves_from_csv: malformed row " + std::to_string(l));
      c.values.push_back(v);
    }
    ++expected;
  }
  return curves;
}

}  // namespace anatomy
