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

#include "sumrefine/dimension.hpp"

#include "sumrefine/text.hpp"

namespace sumrefine {

std::string_view dimension_name(Dimension d) {
  static constexpr std::array<std::string_view, kDimensionCount> kNames = {
      "Consistency", "Coherence", "Relevance", "Fluency", "Readability", "Naturalness",
      "Factuality",
  };
  return kNames[index_of(d)];
}

std::optional<Dimension> parse_dimension(std::string_view name) {
  for (Dimension d : kAllDimensions) {
    if (text::iequals_ascii(dimension_name(d), name)) return d;
  }
  return std::nullopt;
}

std::vector<Dimension> DimensionSet::ordered() const {
  std::vector<Dimension> out;
  for (Dimension d : kAllDimensions) {
    if (contains(d)) out.push_back(d);
  }
  return out;
}

}  // namespace sumrefine
