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

#ifndef SUMREFINE_PROMPT_ENGINE_HPP
#define SUMREFINE_PROMPT_ENGINE_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumrefine/dimension.hpp"

namespace sumrefine::prompt {

inline constexpr std::string_view kTargetLiteral =
    "Summarize the following text to highlight key points:";
inline constexpr std::string_view kLengthPrefix = "The summary should not exceed";
inline constexpr std::string_view kDefaultStyleLiteral =
    "The summary should be written in a concise and formal style.";

inline constexpr std::string_view kFluencyFeedback =
    "Rewrite the summary with more natural sentence structures.";
inline constexpr std::string_view kConsistencyFeedback =
    "Ensure all key points are included in the summary.";
// Kept verbatim, including its grammar.
inline constexpr std::string_view kNaturalnessFeedback =
    "Make the language more naturalness and concise.";

/// Feedback for dimensions without a dedicated literal:
/// "Improve the <lower-cased dimension name> of the summary."
std::string generic_feedback(Dimension d);

/// Literal appended for a failing dimension unless overridden.
std::string default_feedback_literal(Dimension d);

/// Immutable-after-validation prompt settings. Every mutator re-checks the
/// invariants and throws ConfigError on violation.
class PromptConfig {
 public:
  explicit PromptConfig(std::size_t max_summary_words = 100,
                        std::string style_literal = std::string(kDefaultStyleLiteral));

  std::size_t max_summary_words() const { return max_summary_words_; }
  const std::string& style_literal() const { return style_literal_; }
  const std::string& target_literal() const { return target_literal_; }
  const std::string& length_prefix() const { return length_prefix_; }
  const std::array<Dimension, kDimensionCount>& dimension_order() const { return order_; }
  const std::string& feedback_literal(Dimension d) const { return feedback_[index_of(d)]; }

  PromptConfig& set_target_literal(std::string literal);
  PromptConfig& set_length_prefix(std::string prefix);
  PromptConfig& set_feedback_literal(Dimension d, std::string literal);
  /// `order` must be a permutation of the seven dimensions.
  PromptConfig& set_dimension_order(const std::vector<Dimension>& order);

  friend bool operator==(const PromptConfig&, const PromptConfig&) = default;

 private:
  std::size_t max_summary_words_;
  std::string style_literal_;
  std::string target_literal_{kTargetLiteral};
  std::string length_prefix_{kLengthPrefix};
  std::array<Dimension, kDimensionCount> order_ = kAllDimensions;
  std::array<std::string, kDimensionCount> feedback_;
};

struct PromptBundle {
  std::string target_fragment;
  std::string length_fragment;
  std::string style_fragment;
  std::vector<std::string> feedback_fragments;
  /// Fragments joined by single spaces, feedback last.
  std::string composed;

  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

/// "<prefix> <max_summary_words> words."
std::string length_fragment(const PromptConfig& config);

PromptBundle compose_generation_prompt(const PromptConfig& config);

/// One literal per failing dimension, in the configured dimension order.
std::vector<std::string> compose_feedback_fragments(const PromptConfig& config,
                                                    const DimensionSet& failing);
std::vector<std::string> compose_feedback_fragments(const DimensionSet& failing);

/// Returns `base` with `feedback` appended (replacing any feedback already on
/// `base`) and `composed` rebuilt.
PromptBundle with_feedback(const PromptBundle& base, std::vector<std::string> feedback);

/// System instruction sent to the evaluator alongside render_judge_prompt.
std::string_view judge_system_prompt();

/// Builds the evaluator prompt. Source and candidate are embedded between
/// marker lines with `\`, `<`, `>`, `{` and `}` backslash-escaped, so the
/// embedded text can never close a marker or open a JSON object.
/// Throws PreconditionError if either input is empty.
std::string render_judge_prompt(std::string_view source, std::string_view candidate);

std::string escape_embedded(std::string_view raw);
/// Inverse of escape_embedded.
std::string unescape_embedded(std::string_view escaped);

inline constexpr std::string_view kSourceOpen = "<<<SOURCE";
inline constexpr std::string_view kSourceClose = "SOURCE>>>";
inline constexpr std::string_view kSummaryOpen = "<<<SUMMARY";
inline constexpr std::string_view kSummaryClose = "SUMMARY>>>";

}  // namespace sumrefine::prompt

#endif  // SUMREFINE_PROMPT_ENGINE_HPP
