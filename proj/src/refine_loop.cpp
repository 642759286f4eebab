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

#include "sumrefine/refine_loop.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "sumrefine/error.hpp"

namespace sumrefine::loop {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view status_name(TraceStatus s) { return s == TraceStatus::kOk ? "ok" : "aborted"; }

ordered_json failing_to_json(const DimensionSet& set) {
  ordered_json out = ordered_json::array();
  for (Dimension d : set.ordered()) out.push_back(std::string(dimension_name(d)));
  return out;
}

DimensionSet failing_from_json(const ordered_json& j) {
  DimensionSet set;
  for (const auto& name : j) {
    auto d = parse_dimension(name.get<std::string>());
    if (!d) throw Error("unknown dimension in trace: " + name.get<std::string>());
    set.insert(*d);
  }
  return set;
}

ordered_json round_to_json(const RoundRecord& r) {
  ordered_json j;
  j["round"] = r.round_index;
  j["prompt"] = {
      {"target", r.prompt.target_fragment},
      {"length", r.prompt.length_fragment},
      {"style", r.prompt.style_fragment},
      {"feedback", r.prompt.feedback_fragments},
      {"composed", r.prompt.composed},
  };
  j["candidate"] = r.candidate;
  if (r.report) {
    j["report"] = ordered_json::parse(judge::render_score_report(*r.report));
    j["report_warnings"] = r.report->warnings;
  } else {
    j["report"] = nullptr;
    j["parse_error"] = r.parse_error;
  }
  if (r.decision) {
    j["decision"] = {
        {"accepted", r.decision->accepted},
        {"failing", failing_to_json(r.decision->failing_dimensions)},
        {"threshold", r.decision->threshold},
    };
  } else {
    j["decision"] = nullptr;
  }
  return j;
}

RoundRecord round_from_json(const ordered_json& j) {
  RoundRecord r;
  r.round_index = j.at("round").get<int>();
  const auto& p = j.at("prompt");
  r.prompt.target_fragment = p.at("target").get<std::string>();
  r.prompt.length_fragment = p.at("length").get<std::string>();
  r.prompt.style_fragment = p.at("style").get<std::string>();
  r.prompt.feedback_fragments = p.at("feedback").get<std::vector<std::string>>();
  r.prompt.composed = p.at("composed").get<std::string>();
  r.candidate = j.at("candidate").get<std::string>();
  if (!j.at("report").is_null()) {
    r.report = judge::parse_score_report(j.at("report").dump());
    r.report->warnings = j.value("report_warnings", std::vector<std::string>{});
  } else {
    r.parse_error = j.value("parse_error", std::string{});
  }
  if (!j.at("decision").is_null()) {
    const auto& d = j.at("decision");
    judge::GateDecision decision;
    decision.accepted = d.at("accepted").get<bool>();
    decision.failing_dimensions = failing_from_json(d.at("failing"));
    decision.threshold = d.at("threshold").get<double>();
    r.decision = decision;
  }
  return r;
}

LoopTrace aborted_trace(const corpus::Document& doc, std::string error) {
  LoopTrace trace;
  trace.document_id = doc.id;
  trace.status = TraceStatus::kAborted;
  trace.error = std::move(error);
  return trace;
}

}  // namespace

void LoopConfig::validate() const {
  if (!(threshold >= judge::kMinScore && threshold <= judge::kMaxScore)) {
    throw ConfigError("threshold must lie in [1,10]");
  }
  if (max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
  if (max_output_tokens < 1) throw ConfigError("max_output_tokens must be >= 1");
  generator.validate();
  evaluator.validate();
}

DimensionSet RoundRecord::failing() const {
  return decision ? decision->failing_dimensions : DimensionSet::all();
}

std::optional<std::size_t> best_round(const std::vector<RoundRecord>& rounds) {
  if (rounds.empty()) return std::nullopt;
  std::optional<std::size_t> best;
  double best_mean = 0.0;
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    if (!rounds[i].report) continue;
    const double mean = rounds[i].report->mean_score();
    if (!best || mean > best_mean) {
      best = i;
      best_mean = mean;
    }
  }
  return best.value_or(0);
}

LoopTrace run_challenge(const corpus::Document& doc, const LoopConfig& config,
                        gateway::Backend& generator, gateway::Backend& evaluator) {
  if (doc.source.empty()) throw PreconditionError("document " + doc.id + " has an empty source");

  LoopTrace trace;
  trace.document_id = doc.id;
  const prompt::PromptBundle base = prompt::compose_generation_prompt(config.prompt);
  prompt::PromptBundle current = base;

  try {
    for (int k = 1; k <= config.max_rounds; ++k) {
      RoundRecord round;
      round.round_index = k;
      round.prompt = current;
      round.candidate =
          gateway::generate_summary(generator, current, doc.source, config.max_output_tokens);

      if (round.candidate.empty()) {
        round.parse_error = "generator returned an empty summary";
      } else {
        gateway::CompletionRequest request{
            std::string(prompt::judge_system_prompt()),
            prompt::render_judge_prompt(doc.source, round.candidate), config.max_output_tokens};
        const std::string raw = gateway::complete(evaluator, request);
        try {
          judge::ScoreReport report = judge::parse_score_report(raw);
          report.heuristic_consistency = judge::heuristic_consistency(round.candidate, doc.source);
          round.decision = judge::gate(report, config.threshold);
          round.report = std::move(report);
        } catch (const MalformedReportError& e) {
          round.parse_error = e.what();
        }
      }

      const bool accepted = round.decision && round.decision->accepted;
      const DimensionSet failing = round.failing();
      trace.rounds.push_back(std::move(round));
      if (accepted) {
        trace.accepted = true;
        break;
      }
      current = prompt::with_feedback(base, prompt::compose_feedback_fragments(config.prompt,
                                                                               failing));
    }
  } catch (const BackendError& e) {
    trace.status = TraceStatus::kAborted;
    trace.error = e.what();
  }

  trace.rounds_used = static_cast<int>(trace.rounds.size());
  if (trace.accepted) {
    trace.final_candidate = trace.rounds.back().candidate;
  } else if (auto best = best_round(trace.rounds)) {
    trace.final_candidate = trace.rounds[*best].candidate;
  }
  return trace;
}

std::vector<LoopTrace> run_batch(const std::vector<corpus::Document>& docs,
                                 const LoopConfig& config, const BackendProvider& provider,
                                 std::size_t parallelism) {
  if (parallelism < 1) throw PreconditionError("parallelism must be >= 1");
  std::vector<LoopTrace> traces(docs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < docs.size(); i = next.fetch_add(1)) {
      const corpus::Document& doc = docs[i];
      try {
        BackendPair backends = provider(doc);
        if (!backends.generator || !backends.evaluator) {
          traces[i] = aborted_trace(doc, "no backend available for document");
          continue;
        }
        traces[i] = run_challenge(doc, config, *backends.generator, *backends.evaluator);
      } catch (const std::exception& e) {
        traces[i] = aborted_trace(doc, e.what());
      }
    }
  };

  const std::size_t workers = std::min(parallelism, docs.size());
  if (workers <= 1) {
    worker();
    return traces;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();
  return traces;
}

ordered_json trace_to_json(const LoopTrace& trace) {
  ordered_json j;
  j["document_id"] = trace.document_id;
  j["status"] = std::string(status_name(trace.status));
  if (trace.status == TraceStatus::kAborted) j["error"] = trace.error;
  j["accepted"] = trace.accepted;
  j["rounds_used"] = trace.rounds_used;
  j["final_candidate"] = trace.final_candidate;
  ordered_json rounds = ordered_json::array();
  for (const RoundRecord& r : trace.rounds) rounds.push_back(round_to_json(r));
  j["rounds"] = std::move(rounds);
  return j;
}

LoopTrace trace_from_json(const ordered_json& j) {
  LoopTrace trace;
  trace.document_id = j.at("document_id").get<std::string>();
  const std::string status = j.at("status").get<std::string>();
  if (status == "ok") {
    trace.status = TraceStatus::kOk;
  } else if (status == "aborted") {
    trace.status = TraceStatus::kAborted;
    trace.error = j.value("error", std::string{});
  } else {
    throw Error("unknown trace status: " + status);
  }
  trace.accepted = j.at("accepted").get<bool>();
  trace.rounds_used = j.at("rounds_used").get<int>();
  trace.final_candidate = j.at("final_candidate").get<std::string>();
  for (const auto& r : j.at("rounds")) trace.rounds.push_back(round_from_json(r));
  return trace;
}

std::string trace_to_jsonl_line(const LoopTrace& trace) { return trace_to_json(trace).dump(); }

}  // namespace sumrefine::loop
