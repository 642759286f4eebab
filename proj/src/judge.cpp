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

#include "sumrefine/judge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "sumrefine/corpus.hpp"
#include "sumrefine/error.hpp"
#include "sumrefine/text.hpp"

namespace sumrefine::judge {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// End (exclusive) of the balanced object starting at `open`, honouring JSON
// string literals, or npos.
std::size_t balanced_end(std::string_view raw, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < raw.size(); ++i) {
    const char c = raw[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

bool is_report_key(const std::string& key) {
  return parse_dimension(key).has_value() || text::iequals_ascii(key, kPerSentenceFluencyKey) ||
         text::iequals_ascii(key, kPerSentenceNaturalnessKey);
}

const json* find_key(const json& obj, std::string_view key) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (text::iequals_ascii(it.key(), key)) return &it.value();
  }
  return nullptr;
}

double number_of(const json& v, std::string_view what) {
  double x = 0.0;
  if (v.is_number()) {
    x = v.get<double>();
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t used = 0;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || !text::trim(s.substr(used)).empty()) {
      throw MalformedReportError(std::string(what) + " is not a number");
    }
  } else {
    throw MalformedReportError(std::string(what) + " is not a number");
  }
  if (!std::isfinite(x)) throw MalformedReportError(std::string(what) + " is not finite");
  return x;
}

double clamp_score(double x, std::string_view what, std::vector<std::string>& warnings) {
  if (x < kMinScore || x > kMaxScore) {
    const double clamped = std::clamp(x, kMinScore, kMaxScore);
    warnings.push_back(std::string(what) + " " + json(x).dump() + " clamped to " +
                       json(clamped).dump());
    return clamped;
  }
  return x;
}

std::vector<double> sentence_list(const json& obj, std::string_view key,
                                  std::vector<std::string>& warnings) {
  const json* v = find_key(obj, key);
  if (v == nullptr || v->is_null()) return {};
  if (!v->is_array()) throw MalformedReportError(std::string(key) + " is not an array");
  std::vector<double> out;
  out.reserve(v->size());
  for (std::size_t i = 0; i < v->size(); ++i) {
    const std::string what = std::string(key) + "[" + std::to_string(i) + "]";
    out.push_back(clamp_score(number_of((*v)[i], what), what, warnings));
  }
  return out;
}

double mean_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

ScoreReport report_from_object(const json& obj) {
  ScoreReport report;
  report.per_sentence_fluency = sentence_list(obj, kPerSentenceFluencyKey, report.warnings);
  report.per_sentence_naturalness =
      sentence_list(obj, kPerSentenceNaturalnessKey, report.warnings);

  for (Dimension d : kAllDimensions) {
    const std::vector<double>* sentences = nullptr;
    if (d == Dimension::kFluency) sentences = &report.per_sentence_fluency;
    if (d == Dimension::kNaturalness) sentences = &report.per_sentence_naturalness;
    const bool has_sentences = sentences != nullptr && !sentences->empty();

    const std::string name(dimension_name(d));
    const json* v = find_key(obj, name);
    if (v == nullptr || v->is_null()) {
      if (!has_sentences) throw MalformedReportError("missing dimension " + name);
      report.score(d) = mean_of(*sentences);
      continue;
    }
    double score = clamp_score(number_of(*v, name), name, report.warnings);
    if (has_sentences) {
      const double mean = mean_of(*sentences);
      if (std::abs(mean - score) > kSentenceMeanTolerance) {
        report.warnings.push_back(name + " " + json(score).dump() +
                                  " replaced by its per-sentence mean " + json(mean).dump());
        score = mean;
      }
    }
    report.score(d) = score;
  }

  if (const json* h = find_key(obj, kHeuristicConsistencyKey); h != nullptr && !h->is_null()) {
    const double x = number_of(*h, kHeuristicConsistencyKey);
    if (x < 0.0 || x > 1.0) {
      throw MalformedReportError("heuristic_consistency outside [0,1]");
    }
    report.heuristic_consistency = x;
  }
  return report;
}

}  // namespace

double ScoreReport::mean_score() const {
  return std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
}

ScoreReport parse_score_report(std::string_view raw) {
  std::optional<MalformedReportError> first_problem;
  for (std::size_t open = raw.find('{'); open != std::string_view::npos;
       open = raw.find('{', open + 1)) {
    const std::size_t end = balanced_end(raw, open);
    if (end == std::string_view::npos) continue;
    json obj = json::parse(raw.substr(open, end - open), nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) continue;
    const bool report_like = std::any_of(obj.items().begin(), obj.items().end(),
                                         [](const auto& kv) { return is_report_key(kv.key()); });
    if (!report_like) continue;
    try {
      return report_from_object(obj);
    } catch (const MalformedReportError& e) {
      if (!first_problem) first_problem = e;
    }
  }
  if (first_problem) throw *first_problem;
  throw MalformedReportError("no JSON score object found in evaluator output");
}

std::string render_score_report(const ScoreReport& report) {
  ordered_json obj = ordered_json::object();
  for (Dimension d : kAllDimensions) obj[std::string(dimension_name(d))] = report.score(d);
  if (!report.per_sentence_fluency.empty()) {
    obj[std::string(kPerSentenceFluencyKey)] = report.per_sentence_fluency;
  }
  if (!report.per_sentence_naturalness.empty()) {
    obj[std::string(kPerSentenceNaturalnessKey)] = report.per_sentence_naturalness;
  }
  if (report.heuristic_consistency) {
    obj[std::string(kHeuristicConsistencyKey)] = *report.heuristic_consistency;
  }
  return obj.dump();
}

double aggregate_sentence_scores(std::span<const double> per_sentence) {
  if (per_sentence.empty()) throw EmptySummaryError("no sentence scores to aggregate");
  for (double x : per_sentence) {
    if (!(x >= kMinScore && x <= kMaxScore)) {
      throw PreconditionError("sentence score outside [1,10]");
    }
  }
  return mean_of(per_sentence);
}

double heuristic_consistency(std::string_view candidate, std::string_view source) {
  const std::vector<std::string> source_tokens = corpus::tokenize(source);
  if (source_tokens.empty()) throw PreconditionError("source has no tokens");
  const std::set<std::string> source_set(source_tokens.begin(), source_tokens.end());
  std::set<std::string> candidate_set;
  for (std::string& t : corpus::tokenize(candidate)) candidate_set.insert(std::move(t));
  std::size_t overlap = 0;
  for (const std::string& t : candidate_set) overlap += source_set.count(t);
  return static_cast<double>(overlap) / static_cast<double>(source_set.size());
}

GateDecision gate(const ScoreReport& report, double threshold) {
  if (!(threshold >= kMinScore && threshold <= kMaxScore)) {
    throw PreconditionError("gate threshold outside [1,10]");
  }
  GateDecision decision;
  decision.threshold = threshold;
  for (Dimension d : kAllDimensions) {
    if (report.score(d) < threshold) decision.failing_dimensions.insert(d);
  }
  decision.accepted = decision.failing_dimensions.empty();
  return decision;
}

}  // namespace sumrefine::judge
