// Copyright 2026 The sumrefine Authors
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

#include "sumrefine/report.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace sumrefine::report {

std::string csv_number(double x) { return fmt::format("{}", x); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<TableRow>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_field(header[i]);
  }
  out.push_back('\n');
  for (const TableRow& row : rows) {
    bool first = true;
    for (const std::string& cell : row.leading) {
      if (!first) out.push_back(',');
      out += csv_field(cell);
      first = false;
    }
    for (double v : row.values) {
      if (!first) out.push_back(',');
      out += csv_number(v);
      first = false;
    }
    out.push_back('\n');
  }
  return out;
}

std::string text_table(const std::vector<std::string>& header, const std::vector<TableRow>& rows,
                       int decimals) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back(header);
  for (const TableRow& row : rows) {
    std::vector<std::string> line = row.leading;
    for (double v : row.values) line.push_back(fmt::format("{:.{}f}", v, decimals));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size() && c < width.size(); ++c) {
      width[c] = std::max(width[c], line[c].size());
    }
  }
  std::string out;
  for (const auto& line : cells) {
    std::string text;
    for (std::size_t c = 0; c < line.size() && c < width.size(); ++c) {
      if (c) text += "  ";
      text += c == 0 ? fmt::format("{:<{}}", line[c], width[c])
                     : fmt::format("{:>{}}", line[c], width[c]);
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out += text;
    out.push_back('\n');
  }
  return out;
}

}  // namespace sumrefine::report
