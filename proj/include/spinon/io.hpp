#pragma once

// Tabular output shared by the command-line tool: CSV and JSON arrays of
// records, with reals written to 17 significant digits so that every double
// survives a text round trip.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinon/errors.hpp"

namespace spinon::io {

inline std::string format_real(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  if (x == 0.0 && std::signbit(x))
    return "-0.0"; // "-0" would read back as the integer 0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// A cell is either a number (kept as its textual form) or a string.
struct Cell {
  std::string text;
  bool numeric = false;

  static Cell real(double x) { return {format_real(x), std::isfinite(x)}; }
  static Cell integer(long long x) { return {std::to_string(x), true}; }
  static Cell str(std::string s) { return {std::move(s), false}; }

  friend bool operator==(const Cell &, const Cell &) = default;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  friend bool operator==(const Table &, const Table &) = default;
};

inline std::string to_csv(const Table &t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i)
    out += (i ? "," : "") + t.header[i];
  out += '\n';
  for (const auto &row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + row[i].text;
    out += '\n';
  }
  return out;
}

namespace detail {
inline bool looks_numeric(const std::string &s) {
  if (s.empty())
    return false;
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(v);
}
} // namespace detail

inline Table parse_csv(const std::string &text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string &l) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : l) {
      if (c == ',') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    return parts;
  };
  if (!std::getline(in, line))
    throw DomainError("parse_csv: empty input");
  t.header = split(line);
  while (std::getline(in, line)) {
    std::vector<Cell> row;
    for (auto &p : split(line))
      row.push_back({p, detail::looks_numeric(p)});
    if (row.size() != t.header.size())
      throw DomainError("parse_csv: row width does not match header");
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline std::string to_json(const Table &t) {
  std::string out = "[";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out += r ? ",\n  {" : "\n  {";
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      const Cell &c = t.rows[r][i];
      out += (i ? ", " : "") + nlohmann::json(t.header[i]).dump() + ": ";
      out += c.numeric ? c.text : nlohmann::json(c.text).dump();
    }
    out += "}";
  }
  out += t.rows.empty() ? "]\n" : "\n]\n";
  return out;
}

inline Table parse_json(const std::string &text) {
  const auto doc = nlohmann::ordered_json::parse(text);
  if (!doc.is_array())
    throw DomainError("parse_json: expected an array of records");
  Table t;
  for (const auto &rec : doc) {
    if (t.header.empty())
      for (const auto &[key, _] : rec.items())
        t.header.push_back(key);
    std::vector<Cell> row;
    for (const auto &[key, v] : rec.items()) {
      if (v.is_number_integer())
        row.push_back(Cell::integer(v.get<long long>()));
      else if (v.is_number())
        row.push_back(Cell::real(v.get<double>()));
      else if (v.is_null())
        row.push_back(Cell::str("nan"));
      else
        row.push_back(Cell::str(v.get<std::string>()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

} // namespace spinon::io
