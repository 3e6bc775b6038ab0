// Copyright 2026 The ldpd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Portfolio files: comma-separated text with the header
//   grade,obligors,defaults
// and one row per grade, lowest risk first. Blank lines and lines starting
// with '#' are ignored.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ldpd/conservatism.hpp"
#include "ldpd/errors.hpp"

namespace ldpd {

inline constexpr std::string_view kPortfolioHeader = "grade,obligors,defaults";

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::int64_t parse_count(std::string_view field, std::size_t line, const char* column) {
  std::int64_t value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, std::string(column) + " must be an integer, got '" +
                               std::string(field) + "'");
  }
  return value;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace detail

inline Portfolio parse_portfolio(std::istream& in) {
  std::vector<Grade> grades;
  std::set<std::string> names;
  bool header_seen = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = detail::split_csv(line);
    if (!header_seen) {
      std::string joined;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        joined += (i ? "," : "") + detail::lower(fields[i]);
      }
      if (joined != kPortfolioHeader) {
        throw ParseError(line_no, "expected header '" + std::string(kPortfolioHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
    }
    Grade g{std::string(fields[0]), detail::parse_count(fields[1], line_no, "obligors"),
            detail::parse_count(fields[2], line_no, "defaults")};
    if (g.name.empty()) throw ParseError(line_no, "grade name is empty");
    if (!names.insert(g.name).second) throw ParseError(line_no, "duplicate grade '" + g.name + "'");
    if (g.n_obligors < 1) throw ParseError(line_no, "obligors must be >= 1");
    if (g.k_defaults < 0) throw ParseError(line_no, "defaults must be >= 0");
    if (g.k_defaults > g.n_obligors) throw ParseError(line_no, "defaults exceed obligors");
    grades.push_back(std::move(g));
  }
  if (!header_seen) throw ParseError(0, "empty portfolio file");
  if (grades.empty()) throw ParseError(0, "portfolio file has no grades");
  return Portfolio(std::move(grades));
}

inline Portfolio read_portfolio_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open portfolio file '" + path + "'");
  return parse_portfolio(in);
}

inline void write_portfolio(std::ostream& out, const Portfolio& pf) {
  out << kPortfolioHeader << '\n';
  for (const auto& g : pf.grades()) {
    out << g.name << ',' << g.n_obligors << ',' << g.k_defaults << '\n';
  }
}

}  // namespace ldpd
