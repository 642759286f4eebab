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

#ifndef SUMREFINE_REFINE_LOOP_HPP
#define SUMREFINE_REFINE_LOOP_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sumrefine/corpus.hpp"
#include "sumrefine/judge.hpp"
#include "sumrefine/llm_gateway.hpp"
#include "sumrefine/prompt_engine.hpp"

namespace sumrefine::loop {

inline constexpr double kDefaultThreshold = 8.8;
inline constexpr int kDefaultMaxRounds = 5;

struct LoopConfig {
  double threshold = kDefaultThreshold;
  int max_rounds = kDefaultMaxRounds;
  prompt::PromptConfig prompt;
  gateway::BackendSpec generator;
  gateway::BackendSpec evaluator;
  int max_output_tokens = 1024;

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

struct RoundRecord {
  int round_index = 0;
  prompt::PromptBundle prompt;
  std::string candidate;
  /// Absent when the evaluator output could not be parsed.
  std::optional<judge::ScoreReport> report;
  std::string parse_error;
  std::optional<judge::GateDecision> decision;

  /// Failing set driving the next round's feedback: the decision's set, or
  /// all seven dimensions after a parse failure.
  DimensionSet failing() const;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

enum class TraceStatus { kOk, kAborted };

struct LoopTrace {
  std::string document_id;
  std::vector<RoundRecord> rounds;
  std::string final_candidate;
  bool accepted = false;
  int rounds_used = 0;
  TraceStatus status = TraceStatus::kOk;
  std::string error;

  friend bool operator==(const LoopTrace&, const LoopTrace&) = default;
};

/// Runs generate -> judge -> gate -> feedback until acceptance or
/// config.max_rounds. Round k > 1 appends the feedback for round k-1's
/// failing dimensions to the base prompt.
///
/// Backend failures abort the trace (status kAborted, rounds so far kept);
/// they are not rethrown. Throws PreconditionError for an empty source.
LoopTrace run_challenge(const corpus::Document& doc, const LoopConfig& config,
                        gateway::Backend& generator, gateway::Backend& evaluator);

/// Index of the round whose candidate is emitted when the gate never
/// passes: highest mean dimension score among parsed rounds, earliest on
/// ties; round 0 when no round parsed. nullopt for an empty list.
std::optional<std::size_t> best_round(const std::vector<RoundRecord>& rounds);

struct BackendPair {
  std::shared_ptr<gateway::Backend> generator;
  std::shared_ptr<gateway::Backend> evaluator;
};

/// Supplies the backends for one document. May throw; the error is recorded
/// on that document's trace.
using BackendProvider = std::function<BackendPair(const corpus::Document&)>;

/// One trace per document in input order. Up to `parallelism` documents run
/// concurrently; a failing document never stops the batch.
std::vector<LoopTrace> run_batch(const std::vector<corpus::Document>& docs,
                                 const LoopConfig& config, const BackendProvider& provider,
                                 std::size_t parallelism);

nlohmann::ordered_json trace_to_json(const LoopTrace& trace);
LoopTrace trace_from_json(const nlohmann::ordered_json& j);

/// One compact JSON object, no trailing newline.
std::string trace_to_jsonl_line(const LoopTrace& trace);

}  // namespace sumrefine::loop

#endif  // SUMREFINE_REFINE_LOOP_HPP
