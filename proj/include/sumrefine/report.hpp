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

#ifndef SUMREFINE_REPORT_HPP
#define SUMREFINE_REPORT_HPP

#include <string>
#include <string_view>
#include <vector>

namespace sumrefine::report {

/// Shortest decimal form that parses back to the same double.
std::string csv_number(double x);

/// RFC-4180 quoting when the field needs it.
std::string csv_field(std::string_view s);

struct TableRow {
  std::vector<std::string> leading;  // non-numeric cells (labels, ids, flags)
  std::vector<double> values;
};

/// Header line plus one line per row, "\n"-terminated.
std::string csv_table(const std::vector<std::string>& header, const std::vector<TableRow>& rows);

/// Space-aligned table with fixed decimals; first column left-aligned.
std::string text_table(const std::vector<std::string>& header, const std::vector<TableRow>& rows,
                       int decimals = 4);

}  // namespace sumrefine::report

#endif  // SUMREFINE_REPORT_HPP
