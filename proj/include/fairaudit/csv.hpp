// Copyright 2026 The fairaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal delimited-text reader and writer (header row, double-quote quoting).

#ifndef FAIRAUDIT_CSV_HPP_
#define FAIRAUDIT_CSV_HPP_

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fairaudit/types.hpp"

namespace fairaudit {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }

  std::size_t require_column(std::string_view name) const {
    if (auto c = column(name)) return *c;
    throw Error("unknown column '" + std::string(name) + "'");
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Splits one logical record. Returns false at end of input. Quoted fields may
// contain the delimiter, doubled quotes and newlines.
inline bool read_record(std::istream& in, char delim,
                        std::vector<std::string>& out, std::size_t& line_no) {
  out.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == line.size()) {
      if (quoted) {
        std::string next;
        if (!std::getline(in, next)) {
          throw Error("unterminated quote at line " + std::to_string(line_no));
        }
        ++line_no;
        field.push_back('\n');
        line = std::move(next);
        i = static_cast<std::size_t>(-1);
        continue;
      }
      break;
    }
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
    } else if (ch == delim) {
      out.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(ch);
    }
  }
  out.push_back(was_quoted ? field : std::string(trim(field)));
  return true;
}

}  // namespace detail

inline CsvTable read_csv(std::istream& in, char delim = ',') {
  CsvTable t;
  std::size_t line_no = 0;
  std::vector<std::string> rec;
  while (detail::read_record(in, delim, rec, line_no)) {
    if (rec.size() == 1 && rec[0].empty()) continue;  // blank line
    if (t.header.empty()) {
      if (!rec.empty() && rec[0].starts_with("\xEF\xBB\xBF")) {
        rec[0].erase(0, 3);
      }
      t.header = rec;
      continue;
    }
    if (rec.size() != t.header.size()) {
      throw Error("line " + std::to_string(line_no) + ": expected " +
                  std::to_string(t.header.size()) + " fields, got " +
                  std::to_string(rec.size()));
    }
    t.rows.push_back(rec);
  }
  return t;
}

inline CsvTable read_csv_file(const std::filesystem::path& path,
                              char delim = ',') {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_csv(in, delim);
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Parses a whole cell as a finite double.
inline std::optional<double> parse_double(std::string_view s) {
  s = detail::trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::string csv_escape(std::string_view s, char delim = ',') {
  if (s.find_first_of(std::string{delim, '"', '\n', '\r'}) ==
      std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

inline void write_csv_row(std::ostream& out,
                          const std::vector<std::string>& cells,
                          char delim = ',') {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << delim;
    out << csv_escape(cells[i], delim);
  }
  out << '\n';
}

}  // namespace fairaudit

#endif  // FAIRAUDIT_CSV_HPP_
