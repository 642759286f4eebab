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

#include "sumrefine/prompt_engine.hpp"

#include <algorithm>
#include <utility>

#include "sumrefine/error.hpp"
#include "sumrefine/text.hpp"

namespace sumrefine::prompt {
namespace {

void require_fragment(const std::string& value, std::string_view what) {
  if (text::trim(value).empty()) {
    throw ConfigError(std::string(what) + " must not be empty");
  }
}

void append_fragment(std::string& out, std::string_view fragment) {
  if (!out.empty()) out.push_back(' ');
  out.append(fragment);
}

}  // namespace

std::string generic_feedback(Dimension d) {
  return "Improve the " + text::to_lower_ascii(dimension_name(d)) + " of the summary.";
}

std::string default_feedback_literal(Dimension d) {
  switch (d) {
    case Dimension::kFluency:
      return std::string(kFluencyFeedback);
    case Dimension::kConsistency:
      return std::string(kConsistencyFeedback);
    case Dimension::kNaturalness:
      return std::string(kNaturalnessFeedback);
    default:
      return generic_feedback(d);
  }
}

PromptConfig::PromptConfig(std::size_t max_summary_words, std::string style_literal)
    : max_summary_words_(max_summary_words), style_literal_(std::move(style_literal)) {
  if (max_summary_words_ < 1) throw ConfigError("max_summary_words must be >= 1");
  require_fragment(style_literal_, "style literal");
  for (Dimension d : kAllDimensions) feedback_[index_of(d)] = default_feedback_literal(d);
}

PromptConfig& PromptConfig::set_target_literal(std::string literal) {
  require_fragment(literal, "target literal");
  target_literal_ = std::move(literal);
  return *this;
}

PromptConfig& PromptConfig::set_length_prefix(std::string prefix) {
  require_fragment(prefix, "length prefix");
  length_prefix_ = std::move(prefix);
  return *this;
}

PromptConfig& PromptConfig::set_feedback_literal(Dimension d, std::string literal) {
  require_fragment(literal, "feedback literal");
  feedback_[index_of(d)] = std::move(literal);
  return *this;
}

PromptConfig& PromptConfig::set_dimension_order(const std::vector<Dimension>& order) {
  if (order.size() != kDimensionCount) {
    throw ConfigError("dimension order must list all seven dimensions exactly once");
  }
  DimensionSet seen;
  for (Dimension d : order) {
    if (seen.contains(d)) {
      throw ConfigError("dimension " + std::string(dimension_name(d)) + " listed twice");
    }
    seen.insert(d);
  }
  std::copy(order.begin(), order.end(), order_.begin());
  return *this;
}

std::string length_fragment(const PromptConfig& config) {
  return config.length_prefix() + " " + std::to_string(config.max_summary_words()) + " words.";
}

PromptBundle compose_generation_prompt(const PromptConfig& config) {
  PromptBundle bundle;
  bundle.target_fragment = config.target_literal();
  bundle.length_fragment = length_fragment(config);
  bundle.style_fragment = config.style_literal();
  return with_feedback(bundle, {});
}

std::vector<std::string> compose_feedback_fragments(const PromptConfig& config,
                                                    const DimensionSet& failing) {
  std::vector<std::string> out;
  out.reserve(failing.size());
  for (Dimension d : config.dimension_order()) {
    if (failing.contains(d)) out.push_back(config.feedback_literal(d));
  }
  return out;
}

std::vector<std::string> compose_feedback_fragments(const DimensionSet& failing) {
  static const PromptConfig kDefaults;
  return compose_feedback_fragments(kDefaults, failing);
}

PromptBundle with_feedback(const PromptBundle& base, std::vector<std::string> feedback) {
  PromptBundle out = base;
  out.feedback_fragments = std::move(feedback);
  out.composed.clear();
  append_fragment(out.composed, out.target_fragment);
  append_fragment(out.composed, out.length_fragment);
  append_fragment(out.composed, out.style_fragment);
  for (const std::string& f : out.feedback_fragments) append_fragment(out.composed, f);
  return out;
}

std::string_view judge_system_prompt() {
  return "You are a strict evaluator of text summaries. You compare a summary with its "
         "source text and answer only with the requested JSON object.";
}

std::string escape_embedded(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c == '\\' || c == '<' || c == '>' || c == '{' || c == '}') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string unescape_embedded(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] == '\\' && i + 1 < escaped.size()) ++i;
    out.push_back(escaped[i]);
  }
  return out;
}

std::string render_judge_prompt(std::string_view source, std::string_view candidate) {
  if (source.empty()) throw PreconditionError("judge prompt needs a non-empty source");
  if (candidate.empty()) throw PreconditionError("judge prompt needs a non-empty summary");

  std::string dims;
  for (Dimension d : kAllDimensions) {
    if (!dims.empty()) dims += ", ";
    dims += dimension_name(d);
  }

  std::string out;
  out += "Evaluate the summary of the source text below on each of these dimensions: ";
  out += dims;
  out += ". Give every dimension a real-valued score from 1 to 10, where 10 is best.\n";
  out += "Also score each sentence of the summary, in order, for fluency and for naturalness "
         "on the same scale.\n";
  out += "Reply with exactly one JSON object. Its keys are the seven dimension names, each "
         "mapped to a number, plus \"per_sentence_fluency\" and \"per_sentence_naturalness\", "
         "each mapped to an array holding one number per summary sentence. Shape: "
         "{\"Consistency\": <score>, ..., \"Factuality\": <score>, "
         "\"per_sentence_fluency\": [<score>, ...], "
         "\"per_sentence_naturalness\": [<score>, ...]}\n";
  out += "Text between the marker lines is quoted verbatim, except that a backslash precedes "
         "each \\ < > { } character in it.\n";
  out += kSourceOpen;
  out += '\n';
  out += escape_embedded(source);
  out += '\n';
  out += kSourceClose;
  out += '\n';
  out += kSummaryOpen;
  out += '\n';
  out += escape_embedded(candidate);
  out += '\n';
  out += kSummaryClose;
  out += '\n';
  return out;
}

}  // namespace sumrefine::prompt
