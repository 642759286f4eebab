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

#ifndef SUMREFINE_DIMENSION_HPP
#define SUMREFINE_DIMENSION_HPP

#include <array>
#include <bitset>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace sumrefine {

/// The seven judge criteria. Declaration order is the canonical dimension
/// order used for feedback fragments, report serialization and table output.
enum class Dimension : std::size_t {
  kConsistency = 0,
  kCoherence,
  kRelevance,
  kFluency,
  kReadability,
  kNaturalness,
  kFactuality,
};

inline constexpr std::size_t kDimensionCount = 7;

inline constexpr std::array<Dimension, kDimensionCount> kAllDimensions = {
    Dimension::kConsistency, Dimension::kCoherence,   Dimension::kRelevance,
    Dimension::kFluency,     Dimension::kReadability, Dimension::kNaturalness,
    Dimension::kFactuality,
};

constexpr std::size_t index_of(Dimension d) { return static_cast<std::size_t>(d); }

std::string_view dimension_name(Dimension d);

/// Case-insensitive lookup of a dimension by its name.
std::optional<Dimension> parse_dimension(std::string_view name);

/// A set of dimensions. Iteration always follows canonical order.
class DimensionSet {
 public:
  DimensionSet() = default;
  DimensionSet(std::initializer_list<Dimension> dims) {
    for (Dimension d : dims) insert(d);
  }

  static DimensionSet all() {
    DimensionSet s;
    s.bits_.set();
    return s;
  }

  void insert(Dimension d) { bits_.set(index_of(d)); }
  bool contains(Dimension d) const { return bits_.test(index_of(d)); }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }

  /// Members in canonical order.
  std::vector<Dimension> ordered() const;

  /// True when every member of this set is also in `other`.
  bool is_subset_of(const DimensionSet& other) const {
    return (bits_ & ~other.bits_).none();
  }

  friend bool operator==(const DimensionSet&, const DimensionSet&) = default;

 private:
  std::bitset<kDimensionCount> bits_;
};

}  // namespace sumrefine

#endif  // SUMREFINE_DIMENSION_HPP
