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

#include "sumrefine/harness.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "sumrefine/embedders.hpp"
#include "sumrefine/error.hpp"
#include "sumrefine/report.hpp"

namespace sumrefine::harness {
namespace {

using report::TableRow;

std::vector<std::string> metric_header(std::vector<std::string> leading) {
  for (std::string_view c : metrics::kMetricColumns) leading.emplace_back(c);
  return leading;
}

std::vector<double> metric_values(const metrics::MetricVector& m) {
  const auto v = m.values();
  return {v.begin(), v.end()};
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::size_t worker_count(const ExperimentConfig& config) {
  std::size_t n = config.parallel;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (!config.mock_script) {
    for (const auto* spec : {&config.loop.generator, &config.loop.evaluator}) {
      if (spec->max_concurrency > 0) n = std::min(n, spec->max_concurrency);
    }
  }
  return n;
}

loop::BackendProvider make_provider(const ExperimentConfig& config) {
  if (config.mock_script) {
    auto script =
        std::make_shared<const std::map<std::string, MockEntry>>(load_mock_script(*config.mock_script));
    return [script](const corpus::Document& doc) {
      auto it = script->find(doc.id);
      if (it == script->end()) throw ConfigError("mock script has no entry for document " + doc.id);
      return loop::BackendPair{std::make_shared<gateway::ScriptedMock>(it->second.generator),
                               std::make_shared<gateway::ScriptedMock>(it->second.judge)};
    };
  }
  loop::BackendPair shared{gateway::make_backend(config.loop.generator),
                           gateway::make_backend(config.loop.evaluator)};
  return [shared](const corpus::Document&) { return shared; };
}

std::vector<corpus::Document> load_documents(const ExperimentConfig& config) {
  corpus::LoadResult loaded = corpus::load_corpus(config.corpus.path, config.corpus.options);
  for (const std::string& w : loaded.warnings) spdlog::warn("corpus: {}", w);
  if (loaded.documents.empty()) throw ConfigError("corpus has no usable documents");
  if (config.sample_cap) {
    return corpus::sample_documents(loaded.documents, *config.sample_cap, config.seed);
  }
  return std::move(loaded.documents);
}

std::string summary_text(const RunReport& run, const std::string& label) {
  std::size_t accepted = 0;
  for (const auto& t : run.traces) accepted += t.accepted ? 1 : 0;
  std::string out = report::text_table(metric_header({"Setting"}),
                                       {TableRow{{label}, metric_values(run.mean)}});
  out += fmt::format("\ndocuments: {}\naccepted: {}\nacceptance_rate: {:.4f}\n", run.traces.size(),
                     accepted, run.acceptance_rate);
  out += fmt::format("mean_rounds: {:.4f}\naborted: {}\nscored: {}\n", run.mean_rounds, run.aborted,
                     run.per_document.size());
  return out;
}

RunReport run_documents(const ExperimentConfig& config, const std::vector<corpus::Document>& docs,
                        const loop::BackendProvider& provider,
                        const metrics::TokenEmbedder& embedder) {
  RunReport run;
  run.traces = loop::run_batch(docs, config.loop, provider, worker_count(config));

  std::size_t accepted = 0;
  std::size_t with_rounds = 0;
  double rounds_total = 0.0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const loop::LoopTrace& trace = run.traces[i];
    if (trace.accepted) ++accepted;
    if (trace.rounds_used > 0) {
      ++with_rounds;
      rounds_total += trace.rounds_used;
    }
    if (trace.status == loop::TraceStatus::kAborted) {
      ++run.aborted;
      spdlog::error("document {}: {}", trace.document_id, trace.error);
      continue;
    }
    if (!docs[i].reference_summary) continue;
    metrics::PairEvaluation eval =
        metrics::evaluate_pair(trace.final_candidate, *docs[i].reference_summary, embedder);
    for (const std::string& w : eval.warnings) spdlog::warn("document {}: {}", trace.document_id, w);
    run.per_document.push_back({trace.document_id, trace.accepted, trace.rounds_used, eval.metrics});
  }

  std::vector<metrics::MetricVector> all;
  all.reserve(run.per_document.size());
  for (const auto& d : run.per_document) all.push_back(d.metrics);
  run.mean = metrics::mean_metrics(all);
  run.acceptance_rate =
      run.traces.empty() ? 0.0 : static_cast<double>(accepted) / static_cast<double>(run.traces.size());
  run.mean_rounds = with_rounds == 0 ? 0.0 : rounds_total / static_cast<double>(with_rounds);
  run.exit_code = run.aborted > config.failure_budget ? kExitBackend : kExitOk;
  return run;
}

void write_run_outputs(const RunReport& run, const std::filesystem::path& dir, double threshold) {
  std::filesystem::create_directories(dir);

  std::string traces;
  for (const auto& t : run.traces) {
    traces += loop::trace_to_jsonl_line(t);
    traces.push_back('\n');
  }
  write_file(dir / "traces.jsonl", traces);

  std::vector<TableRow> rows;
  for (const auto& d : run.per_document) {
    rows.push_back({{d.document_id, d.accepted ? "true" : "false", std::to_string(d.rounds_used)},
                    metric_values(d.metrics)});
  }
  write_file(dir / "metrics.csv",
             report::csv_table(metric_header({"document_id", "accepted", "rounds_used"}), rows));

  const std::string label = threshold_label(threshold);
  write_file(dir / "summary.csv", report::csv_table(metric_header({"Setting"}),
                                                    {TableRow{{label}, metric_values(run.mean)}}));
  write_file(dir / "summary.txt", summary_text(run, label));
}

}  // namespace

std::unique_ptr<metrics::TokenEmbedder> make_embedder(const EmbedderSpec& spec) {
  switch (spec.kind) {
    case EmbedderKind::kOneHot:
      return std::make_unique<metrics::OneHotEmbedder>();
    case EmbedderKind::kFile:
      return std::make_unique<metrics::VectorFileEmbedder>(spec.path);
    case EmbedderKind::kHttp:
      return std::make_unique<metrics::HttpEmbedder>(
          spec.endpoint_url, std::chrono::duration<double>(spec.timeout_seconds));
  }
  throw ConfigError("unknown embedder kind");
}

std::map<std::string, MockEntry> load_mock_script(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read mock script " + path.string());
  std::map<std::string, MockEntry> script;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where = [&] { return path.string() + ":" + std::to_string(line_no) + ": "; };
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError(where() + "not a JSON object");
    if (!j.contains("id") || !(j["id"].is_string() || j["id"].is_number_integer())) {
      throw ConfigError(where() + "missing \"id\"");
    }
    const std::string id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
    MockEntry entry;
    for (const char* key : {"generator", "judge"}) {
      if (!j.contains(key)) continue;
      if (!j[key].is_array()) throw ConfigError(where() + "\"" + key + "\" must be an array");
      auto& target = std::string_view(key) == "generator" ? entry.generator : entry.judge;
      for (const auto& item : j[key]) {
        if (item.is_string()) {
          target.push_back(item.get<std::string>());
        } else if (item.is_object() && std::string_view(key) == "judge") {
          target.push_back(item.dump());
        } else {
          throw ConfigError(where() + "unexpected entry in \"" + key + "\"");
        }
      }
    }
    if (!script.emplace(id, std::move(entry)).second) {
      throw ConfigError(where() + "duplicate id " + id);
    }
  }
  return script;
}

std::string threshold_label(double threshold) {
  std::string s = fmt::format("{}", threshold);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return "TS=" + s;
}

RunReport cmd_run(const ExperimentConfig& config) {
  config.validate();
  const std::vector<corpus::Document> docs = load_documents(config);
  const loop::BackendProvider provider = make_provider(config);
  const auto embedder = make_embedder(config.embedder);
  spdlog::info("running {} documents at threshold {}", docs.size(), config.loop.threshold);

  RunReport run = run_documents(config, docs, provider, *embedder);
  write_run_outputs(run, config.output_dir, config.loop.threshold);
  return run;
}

SweepReport cmd_sweep(const ExperimentConfig& config, std::vector<double> thresholds) {
  if (thresholds.empty()) throw ConfigError("sweep needs at least one threshold");
  std::sort(thresholds.begin(), thresholds.end());
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] >= judge::kMinScore && thresholds[i] <= judge::kMaxScore)) {
      throw ConfigError(fmt::format("sweep threshold {} is outside [1,10]", thresholds[i]));
    }
    if (i > 0 && thresholds[i] == thresholds[i - 1]) {
      throw ConfigError(fmt::format("sweep threshold {} is listed twice", thresholds[i]));
    }
  }
  config.validate();
  const std::vector<corpus::Document> docs = load_documents(config);

  SweepReport sweep;
  std::vector<TableRow> rows;
  for (double t : thresholds) {
    ExperimentConfig run_config = config;
    run_config.loop.threshold = t;
    const std::string label = threshold_label(t);
    spdlog::info("sweep {}", label);
    // Fresh backends and embedder per threshold so runs are independent.
    const auto embedder = make_embedder(config.embedder);
    RunReport run = run_documents(run_config, docs, make_provider(run_config), *embedder);
    write_run_outputs(run, config.output_dir / ("ts_" + label.substr(3)), t);
    sweep.exit_code = std::max(sweep.exit_code, run.exit_code);

    sweep.rows.push_back({t, run.mean, run.acceptance_rate, run.mean_rounds});
    std::vector<double> values = metric_values(run.mean);
    values.push_back(run.acceptance_rate);
    values.push_back(run.mean_rounds);
    rows.push_back({{label}, std::move(values)});
  }

  std::vector<std::string> header = metric_header({"Setting"});
  header.emplace_back("acceptance_rate");
  header.emplace_back("mean_rounds");
  std::filesystem::create_directories(config.output_dir);
  write_file(config.output_dir / "ablation.csv", report::csv_table(header, rows));
  write_file(config.output_dir / "ablation.txt", report::text_table(header, rows));
  return sweep;
}

std::vector<metrics::MetricVector> cmd_score(const std::filesystem::path& candidates,
                                             const std::filesystem::path& references,
                                             const metrics::TokenEmbedder& embedder,
                                             std::ostream& out) {
  const std::vector<std::string> cand = read_lines(candidates);
  const std::vector<std::string> ref = read_lines(references);
  if (cand.size() != ref.size()) {
    throw ConfigError(fmt::format("{} candidates but {} references", cand.size(), ref.size()));
  }
  std::vector<metrics::MetricVector> scores;
  std::vector<TableRow> rows;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    metrics::PairEvaluation eval = metrics::evaluate_pair(cand[i], ref[i], embedder);
    for (const std::string& w : eval.warnings) spdlog::warn("pair {}: {}", i + 1, w);
    rows.push_back({{std::to_string(i + 1)}, metric_values(eval.metrics)});
    scores.push_back(eval.metrics);
  }
  if (!scores.empty()) rows.push_back({{"mean"}, metric_values(metrics::mean_metrics(scores))});
  out << report::csv_table(metric_header({"pair"}), rows);
  return scores;
}

}  // namespace sumrefine::harness
