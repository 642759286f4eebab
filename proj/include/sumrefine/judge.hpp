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

#ifndef SUMREFINE_JUDGE_HPP
#define SUMREFINE_JUDGE_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sumrefine/dimension.hpp"

namespace sumrefine::judge {

inline constexpr double kMinScore = 1.0;
inline constexpr double kMaxScore = 10.0;
/// Tolerance between a dimension score and its per-sentence mean.
inline constexpr double kSentenceMeanTolerance = 1e-9;

inline constexpr std::string_view kPerSentenceFluencyKey = "per_sentence_fluency";
inline constexpr std::string_view kPerSentenceNaturalnessKey = "per_sentence_naturalness";
inline constexpr std::string_view kHeuristicConsistencyKey = "heuristic_consistency";

/// Judge verdict for one candidate.
///
/// When a per-sentence list is non-empty, the matching dimension score equals
/// its arithmetic mean (within kSentenceMeanTolerance).
struct ScoreReport {
  std::array<double, kDimensionCount> scores{};
  /// Unique-token overlap of candidate and source; set by the caller that
  /// knows both texts. Diagnostic only, never gates.
  std::optional<double> heuristic_consistency;
  std::vector<double> per_sentence_fluency;
  std::vector<double> per_sentence_naturalness;
  /// Parser notes such as clamped values. Not part of the wire format.
  std::vector<std::string> warnings;

  double score(Dimension d) const { return scores[index_of(d)]; }
  double& score(Dimension d) { return scores[index_of(d)]; }
  /// Mean over the seven dimension scores.
  double mean_score() const;

  friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

struct GateDecision {
  bool accepted = false;
  DimensionSet failing_dimensions;
  double threshold = 0.0;

  friend bool operator==(const GateDecision&, const GateDecision&) = default;
};

/// Extracts a report from raw evaluator output.
///
/// The first balanced JSON object that parses and carries report keys is
/// used; surrounding prose is ignored. Dimension keys match
/// case-insensitively. Scores outside [1,10] are clamped and a warning is
/// recorded. A dimension may be omitted only when its per-sentence list is
/// present, in which case the list mean stands in for it.
/// Throws MalformedReportError when no object is found or a dimension is
/// missing or non-numeric.
ScoreReport parse_score_report(std::string_view raw);

/// Serializes to the evaluator wire format (one JSON object). Per-sentence
/// arrays and the heuristic are written only when present.
std::string render_score_report(const ScoreReport& report);

/// Arithmetic mean of per-sentence scores. Throws EmptySummaryError on an
/// empty list and PreconditionError on values outside [1,10].
double aggregate_sentence_scores(std::span<const double> per_sentence);

/// |unique(candidate) ∩ unique(source)| / |unique(source)| over corpus tokens.
/// Throws PreconditionError if the source has no tokens.
double heuristic_consistency(std::string_view candidate, std::string_view source);

/// Every dimension must score >= threshold. Throws PreconditionError when
/// the threshold lies outside [1,10].
GateDecision gate(const ScoreReport& report, double threshold);

}  // namespace sumrefine::judge

#endif  // SUMREFINE_JUDGE_HPP
