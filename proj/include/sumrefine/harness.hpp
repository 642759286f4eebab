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

// Experiment harness behind the `sumrefine` CLI: end-to-end runs, threshold
// sweeps and standalone metric scoring.

#ifndef SUMREFINE_HARNESS_HPP
#define SUMREFINE_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sumrefine/corpus.hpp"
#include "sumrefine/metrics.hpp"
#include "sumrefine/refine_loop.hpp"

namespace sumrefine::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBackend = 3;

inline const std::vector<double> kDefaultSweepThresholds = {8.0, 8.2, 8.4, 8.6, 8.8};

enum class EmbedderKind { kOneHot, kFile, kHttp };

struct EmbedderSpec {
  EmbedderKind kind = EmbedderKind::kOneHot;
  std::filesystem::path path;
  std::string endpoint_url;
  double timeout_seconds = 60.0;
};

std::unique_ptr<metrics::TokenEmbedder> make_embedder(const EmbedderSpec& spec);

struct CorpusSpec {
  std::filesystem::path path;
  corpus::LoadOptions options;
};

struct ExperimentConfig {
  CorpusSpec corpus;
  loop::LoopConfig loop;
  EmbedderSpec embedder;
  std::optional<std::size_t> sample_cap;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  /// 0 picks the number of hardware threads.
  std::size_t parallel = 0;
  /// Per-document scripted responses; replaces both backends when set.
  std::optional<std::filesystem::path> mock_script;
  /// Aborted traces tolerated before a run exits with kExitBackend.
  std::size_t failure_budget = 0;
  std::vector<double> sweep_thresholds = kDefaultSweepThresholds;

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

/// Reads a TOML config (JSON when the extension is .json). Relative paths
/// resolve against the config file's directory. Throws ConfigError.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Same, from text. `base_dir` anchors relative paths.
ExperimentConfig parse_experiment_config(std::string_view text, bool is_json,
                                         const std::filesystem::path& base_dir);

/// Scripted responses for one document.
struct MockEntry {
  std::vector<std::string> generator;
  std::vector<std::string> judge;
};

/// JSONL, one object per document:
///   {"id": "<document id>", "generator": ["...", ...], "judge": [<report>, ...]}
/// Judge entries may be strings (raw evaluator output) or objects (serialized
/// compactly). Throws ConfigError.
std::map<std::string, MockEntry> load_mock_script(const std::filesystem::path& path);

struct DocumentMetrics {
  std::string document_id;
  bool accepted = false;
  int rounds_used = 0;
  metrics::MetricVector metrics;
};

struct RunReport {
  std::vector<loop::LoopTrace> traces;
  std::vector<DocumentMetrics> per_document;
  metrics::MetricVector mean;
  double acceptance_rate = 0.0;
  double mean_rounds = 0.0;
  std::size_t aborted = 0;
  int exit_code = kExitOk;
};

/// Runs the loop over the (sampled) corpus and writes traces.jsonl,
/// metrics.csv, summary.csv and summary.txt into config.output_dir.
/// Throws ConfigError or IngestionError before any backend call; backend
/// failures are reported through exit_code with outputs still written.
RunReport cmd_run(const ExperimentConfig& config);

struct AblationRow {
  double threshold = 0.0;
  metrics::MetricVector mean;
  double acceptance_rate = 0.0;
  double mean_rounds = 0.0;
};

struct SweepReport {
  std::vector<AblationRow> rows;
  int exit_code = kExitOk;
};

/// One cmd_run per threshold (ascending) into <output_dir>/ts_<threshold>/,
/// then ablation.csv and ablation.txt in output_dir. Throws ConfigError for
/// an empty list, duplicates, or thresholds outside [1,10].
SweepReport cmd_sweep(const ExperimentConfig& config, std::vector<double> thresholds);

/// Scores line-paired candidate/reference files. Writes a per-pair CSV with a
/// trailing mean row (header only for empty files). Throws ConfigError on a
/// line-count mismatch or unreadable file.
std::vector<metrics::MetricVector> cmd_score(const std::filesystem::path& candidates,
                                             const std::filesystem::path& references,
                                             const metrics::TokenEmbedder& embedder,
                                             std::ostream& out);

/// "TS=8.8"-style row label.
std::string threshold_label(double threshold);

}  // namespace sumrefine::harness

#endif  // SUMREFINE_HARNESS_HPP
