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

// sumrefine: run the refinement loop over a corpus, sweep gate thresholds,
// or score candidate/reference files.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sumrefine/error.hpp"
#include "sumrefine/harness.hpp"

namespace {

namespace h = sumrefine::harness;

struct RunFlags {
  std::string config;
  std::optional<double> threshold;
  std::optional<std::size_t> sample;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> parallel;
  std::optional<std::string> mock;
  std::optional<std::string> output_dir;
};

h::ExperimentConfig load_with_overrides(const RunFlags& flags) {
  h::ExperimentConfig config = h::load_experiment_config(flags.config);
  if (flags.threshold) config.loop.threshold = *flags.threshold;
  if (flags.sample) config.sample_cap = *flags.sample;
  if (flags.seed) config.seed = *flags.seed;
  if (flags.parallel) config.parallel = *flags.parallel;
  if (flags.mock) config.mock_script = *flags.mock;
  if (flags.output_dir) config.output_dir = *flags.output_dir;
  return config;
}

void add_common(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--config", flags.config, "TOML or JSON experiment config")->required();
  cmd->add_option("--sample", flags.sample, "Subsample at most N documents");
  cmd->add_option("--seed", flags.seed, "Sampling seed");
  cmd->add_option("--parallel", flags.parallel, "Documents processed concurrently");
  cmd->add_option("--mock", flags.mock, "Scripted backend responses (JSONL)");
  cmd->add_option("--output-dir", flags.output_dir, "Directory for reports");
}

int run(const RunFlags& flags) {
  const h::RunReport report = h::cmd_run(load_with_overrides(flags));
  spdlog::info("{} traces, acceptance rate {:.4f}, {} aborted", report.traces.size(),
               report.acceptance_rate, report.aborted);
  return report.exit_code;
}

int sweep(const RunFlags& flags, const std::vector<double>& thresholds) {
  h::ExperimentConfig config = load_with_overrides(flags);
  const std::vector<double> list = thresholds.empty() ? config.sweep_thresholds : thresholds;
  const h::SweepReport report = h::cmd_sweep(config, list);
  spdlog::info("{} ablation rows written to {}", report.rows.size(), config.output_dir.string());
  return report.exit_code;
}

int score(const std::string& candidates, const std::string& references,
          const std::string& config_path, const std::string& output) {
  h::EmbedderSpec spec;
  if (!config_path.empty()) spec = h::load_experiment_config(config_path).embedder;
  const auto embedder = h::make_embedder(spec);
  if (output.empty()) {
    h::cmd_score(candidates, references, *embedder, std::cout);
    return h::kExitOk;
  }
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw sumrefine::Error("cannot write " + output);
  h::cmd_score(candidates, references, *embedder, out);
  return h::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("sumrefine"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Judge-gated summary refinement and evaluation"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  RunFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "Run the loop over a corpus");
  add_common(run_cmd, run_flags);
  run_cmd->add_option("--threshold", run_flags.threshold, "Gate threshold in [1,10]");

  RunFlags sweep_flags;
  std::vector<double> thresholds;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run once per gate threshold");
  add_common(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--thresholds", thresholds, "Comma-separated thresholds")->delimiter(',');

  std::string candidates, references, score_config, score_output;
  CLI::App* score_cmd = app.add_subcommand("score", "Score line-paired files");
  score_cmd->add_option("--candidates", candidates, "One candidate per line")->required();
  score_cmd->add_option("--references", references, "One reference per line")->required();
  score_cmd->add_option("--config", score_config, "Config supplying the [embedder] table");
  score_cmd->add_option("--output", score_output, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? h::kExitOk : h::kExitConfig;
  }
  if (verbose) spdlog::set_level(spdlog::level::debug);

  try {
    if (*run_cmd) return run(run_flags);
    if (*sweep_cmd) return sweep(sweep_flags, thresholds);
    return score(candidates, references, score_config, score_output);
  } catch (const sumrefine::ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return h::kExitConfig;
  } catch (const sumrefine::IngestionError& e) {
    spdlog::error("corpus: {}", e.what());
    return h::kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return h::kExitFailure;
  }
}
