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

#include <random>

#include <gtest/gtest.h>

#include "sumrefine/error.hpp"
#include "sumrefine/judge.hpp"
#include "test_util.hpp"

namespace sumrefine::prompt {
namespace {

std::size_t count_occurrences(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string_view::npos;
       pos = hay.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

DimensionSet subset_from_mask(unsigned mask) {
  DimensionSet s;
  for (std::size_t i = 0; i < kDimensionCount; ++i) {
    if (mask & (1u << i)) s.insert(kAllDimensions[i]);
  }
  return s;
}

TEST(ComposeGenerationPrompt, Fragments) {
  const PromptBundle b = compose_generation_prompt(PromptConfig(100));
  EXPECT_EQ(b.target_fragment, "Summarize the following text to highlight key points:");
  EXPECT_EQ(b.length_fragment, "The summary should not exceed 100 words.");
  EXPECT_EQ(b.style_fragment, "The summary should be written in a concise and formal style.");
  EXPECT_TRUE(b.feedback_fragments.empty());
}

TEST(ComposeGenerationPrompt, ByteExactForFiftyWords) {
  const std::string expected = std::string(kTargetLiteral) + " " + std::string(kLengthPrefix) +
                               " 50 words. " + std::string(kDefaultStyleLiteral);
  EXPECT_EQ(compose_generation_prompt(PromptConfig(50)).composed, expected);
  EXPECT_EQ(expected,
            "Summarize the following text to highlight key points: The summary should not exceed "
            "50 words. The summary should be written in a concise and formal style.");
}

TEST(ComposeGenerationPrompt, InjectiveInWordLimitAndFragmentsAppearOnce) {
  std::set<std::string> seen;
  for (std::size_t words = 1; words <= 300; ++words) {
    const PromptBundle b = compose_generation_prompt(PromptConfig(words));
    EXPECT_TRUE(seen.insert(b.composed).second) << words;
    EXPECT_EQ(count_occurrences(b.composed, b.target_fragment), 1u);
    EXPECT_EQ(count_occurrences(b.composed, b.length_fragment), 1u);
    EXPECT_EQ(count_occurrences(b.composed, b.style_fragment), 1u);
  }
}

TEST(ComposeGenerationPrompt, CustomStyleAndDeterminism) {
  const PromptConfig cfg(30, "Write plainly.");
  EXPECT_EQ(compose_generation_prompt(cfg), compose_generation_prompt(cfg));
  EXPECT_EQ(compose_generation_prompt(cfg).composed,
            std::string(kTargetLiteral) + " The summary should not exceed 30 words. Write plainly.");
}

TEST(PromptConfig, ValidatesInvariants) {
  EXPECT_THROW(PromptConfig(0), ConfigError);
  EXPECT_THROW(PromptConfig(10, ""), ConfigError);
  PromptConfig cfg;
  EXPECT_THROW(cfg.set_dimension_order({Dimension::kFluency}), ConfigError);
  EXPECT_THROW(cfg.set_dimension_order({Dimension::kFluency, Dimension::kFluency,
                                        Dimension::kCoherence, Dimension::kRelevance,
                                        Dimension::kReadability, Dimension::kNaturalness,
                                        Dimension::kFactuality}),
               ConfigError);
  EXPECT_THROW(cfg.set_target_literal(""), ConfigError);
}

TEST(ComposeFeedbackFragments, Literals) {
  EXPECT_EQ(compose_feedback_fragments(DimensionSet{Dimension::kFluency}),
            std::vector<std::string>{"Rewrite the summary with more natural sentence structures."});
  EXPECT_TRUE(compose_feedback_fragments(DimensionSet{}).empty());
  EXPECT_EQ(compose_feedback_fragments(DimensionSet{Dimension::kNaturalness, Dimension::kConsistency}),
            (std::vector<std::string>{"Ensure all key points are included in the summary.",
                                      "Make the language more naturalness and concise."}));
  EXPECT_EQ(compose_feedback_fragments(DimensionSet{Dimension::kCoherence}),
            std::vector<std::string>{"Improve the coherence of the summary."});
  EXPECT_EQ(generic_feedback(Dimension::kFactuality), "Improve the factuality of the summary.");
}

TEST(ComposeFeedbackFragments, OneFragmentPerFailingDimensionForEverySubset) {
  for (unsigned mask = 0; mask < (1u << kDimensionCount); ++mask) {
    const DimensionSet failing = subset_from_mask(mask);
    const auto fragments = compose_feedback_fragments(failing);
    ASSERT_EQ(fragments.size(), failing.size()) << mask;
    std::size_t i = 0;
    for (Dimension d : failing.ordered()) EXPECT_EQ(fragments[i++], default_feedback_literal(d));
  }
}

TEST(ComposeFeedbackFragments, FollowsConfiguredOrderAndOverrides) {
  PromptConfig cfg;
  cfg.set_dimension_order({Dimension::kFactuality, Dimension::kNaturalness, Dimension::kReadability,
                           Dimension::kFluency, Dimension::kRelevance, Dimension::kCoherence,
                           Dimension::kConsistency});
  cfg.set_feedback_literal(Dimension::kRelevance, "Stay on topic.");
  const auto fragments = compose_feedback_fragments(
      cfg, DimensionSet{Dimension::kConsistency, Dimension::kRelevance, Dimension::kFactuality});
  EXPECT_EQ(fragments, (std::vector<std::string>{"Improve the factuality of the summary.",
                                                 "Stay on topic.",
                                                 std::string(kConsistencyFeedback)}));
}

TEST(WithFeedback, AppendsAfterBaseWithSingleSpaces) {
  const PromptBundle base = compose_generation_prompt(PromptConfig(50));
  const PromptBundle b = with_feedback(base, {"One.", "Two."});
  EXPECT_EQ(b.composed, base.composed + " One. Two.");
  EXPECT_EQ(b.feedback_fragments, (std::vector<std::string>{"One.", "Two."}));
  EXPECT_EQ(with_feedback(base, {}).composed, base.composed);
  // Feedback replaces, never stacks.
  EXPECT_EQ(with_feedback(b, {"Three."}).composed, base.composed + " Three.");
}

TEST(RenderJudgePrompt, ContainsInputsAndDimensions) {
  const std::string p = render_judge_prompt("S", "C");
  EXPECT_NE(p.find("\nS\n"), std::string::npos);
  EXPECT_NE(p.find("\nC\n"), std::string::npos);
  for (Dimension d : kAllDimensions) EXPECT_NE(p.find(dimension_name(d)), std::string::npos);
  EXPECT_EQ(p, render_judge_prompt("S", "C"));
  EXPECT_THROW(render_judge_prompt("", "C"), PreconditionError);
  EXPECT_THROW(render_judge_prompt("S", ""), PreconditionError);
}

std::string between(const std::string& text, std::string_view open, std::string_view close) {
  const std::size_t start = text.find(std::string(open) + "\n") + open.size() + 1;
  const std::size_t stop = text.find("\n" + std::string(close), start);
  return text.substr(start, stop - start);
}

TEST(RenderJudgePrompt, DelimiterFuzzRoundTrip) {
  std::mt19937_64 rng(21);
  const std::vector<std::string> pieces = {
      "{", "}", "<", ">", "\\", "\"", "<<<SUMMARY", "SUMMARY>>>", "<<<SOURCE", "SOURCE>>>", "\n",
      " ", "Fluency", "\"Fluency\": 1", ":", ",", "x", "é", testing::report_json(1.0)};
  for (int trial = 0; trial < 500; ++trial) {
    std::string candidate = "c";
    std::string source = "s";
    const std::size_t len = rng() % 12;
    for (std::size_t i = 0; i < len; ++i) candidate += pieces[rng() % pieces.size()];
    for (std::size_t i = 0; i < len; ++i) source += pieces[rng() % pieces.size()];

    const std::string prompt = render_judge_prompt(source, candidate);
    EXPECT_EQ(unescape_embedded(between(prompt, kSummaryOpen, kSummaryClose)), candidate);
    EXPECT_EQ(unescape_embedded(between(prompt, kSourceOpen, kSourceClose)), source);
    EXPECT_EQ(count_occurrences(prompt, kSummaryClose), 1u);
    EXPECT_EQ(count_occurrences(prompt, kSourceClose), 1u);

    // A judge echoing the prompt before its answer still yields its own report.
    const std::string echoed = prompt + "\n" + testing::report_json(7.5);
    const judge::ScoreReport r = judge::parse_score_report(echoed);
    for (Dimension d : kAllDimensions) EXPECT_EQ(r.score(d), 7.5) << candidate;
  }
}

TEST(EscapeEmbedded, InverseOnArbitraryBytes) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    std::string s(rng() % 30, '\0');
    for (char& c : s) c = static_cast<char>(rng() % 256);
    EXPECT_EQ(unescape_embedded(escape_embedded(s)), s);
  }
}

}  // namespace
}  // namespace sumrefine::prompt
