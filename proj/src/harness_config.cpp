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

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <toml.hpp>

#include "sumrefine/error.hpp"
#include "sumrefine/harness.hpp"

namespace sumrefine::harness {
namespace {

using json = nlohmann::json;

// Typed access to one config table; rejects keys it was never asked about.
class Section {
 public:
  Section(const json& root, std::string name) : name_(std::move(name)) {
    if (root.contains(name_)) {
      if (!root[name_].is_object()) throw ConfigError("[" + name_ + "] must be a table");
      obj_ = root[name_];
    } else {
      obj_ = json::object();
    }
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return obj_.contains(key);
  }

  std::string string(const std::string& key, std::string fallback) {
    if (!has(key)) return fallback;
    if (!obj_[key].is_string()) throw error(key, "must be a string");
    return obj_[key].get<std::string>();
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    if (!obj_[key].is_number()) throw error(key, "must be a number");
    const double x = obj_[key].get<double>();
    if (!std::isfinite(x)) throw error(key, "must be finite");
    return x;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    if (!obj_[key].is_number_integer()) throw error(key, "must be an integer");
    return obj_[key].get<std::int64_t>();
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    const std::int64_t v = integer(key, static_cast<std::int64_t>(fallback));
    if (v < 0) throw error(key, "must be >= 0");
    return static_cast<std::size_t>(v);
  }

  const json& raw(const std::string& key) {
    known_.insert(key);
    return obj_.at(key);
  }

  void reject_unknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!known_.count(it.key())) throw ConfigError("unknown key " + name_ + "." + it.key());
    }
  }

  ConfigError error(const std::string& key, const std::string& what) const {
    return ConfigError(name_ + "." + key + " " + what);
  }

 private:
  std::string name_;
  json obj_;
  std::set<std::string> known_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

gateway::BackendSpec read_backend(const json& root, const std::string& name) {
  Section s(root, name);
  gateway::BackendSpec spec;
  const std::string kind = s.string("kind", "scripted_mock");
  auto parsed = gateway::parse_backend_kind(kind);
  if (!parsed) throw s.error("kind", "must be http_chat or scripted_mock");
  spec.kind = *parsed;
  spec.endpoint_url = s.string("endpoint_url", "");
  spec.model_name = s.string("model_name", "");
  spec.timeout = std::chrono::duration<double>(s.number("timeout_s", 60.0));
  spec.max_retries = static_cast<int>(s.integer("max_retries", 3));
  spec.temperature = s.number("temperature", 0.0);
  spec.api_key_env = s.string("api_key_env", std::string(gateway::kDefaultApiKeyEnv));
  spec.initial_backoff = std::chrono::milliseconds(s.integer("initial_backoff_ms", 1000));
  spec.max_concurrency = s.count("max_concurrency", 0);
  s.reject_unknown();
  return spec;
}

prompt::PromptConfig read_prompt(const json& root) {
  Section s(root, "prompt");
  const std::int64_t words = s.integer("max_summary_words", 100);
  if (words < 1) throw s.error("max_summary_words", "must be >= 1");
  prompt::PromptConfig config(static_cast<std::size_t>(words),
                              s.string("style_literal", std::string(prompt::kDefaultStyleLiteral)));
  if (s.has("target_literal")) config.set_target_literal(s.string("target_literal", ""));
  if (s.has("length_prefix")) config.set_length_prefix(s.string("length_prefix", ""));
  if (s.has("dimension_order")) {
    const json& order = s.raw("dimension_order");
    if (!order.is_array()) throw s.error("dimension_order", "must be an array");
    std::vector<Dimension> dims;
    for (const json& name : order) {
      auto d = name.is_string() ? parse_dimension(name.get<std::string>()) : std::nullopt;
      if (!d) throw s.error("dimension_order", "has an unknown dimension " + name.dump());
      dims.push_back(*d);
    }
    config.set_dimension_order(dims);
  }
  if (s.has("feedback")) {
    const json& feedback = s.raw("feedback");
    if (!feedback.is_object()) throw s.error("feedback", "must be a table");
    for (auto it = feedback.begin(); it != feedback.end(); ++it) {
      auto d = parse_dimension(it.key());
      if (!d) throw s.error("feedback", "has an unknown dimension " + it.key());
      if (!it->is_string()) throw s.error("feedback." + it.key(), "must be a string");
      config.set_feedback_literal(*d, it->get<std::string>());
    }
  }
  s.reject_unknown();
  return config;
}

json to_json_tree(std::string_view text, bool is_json) {
  if (is_json) {
    json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (root.is_discarded() || !root.is_object()) throw ConfigError("config is not a JSON object");
    return root;
  }
  try {
    toml::table table = toml::parse(text);
    std::ostringstream buf;
    buf << toml::json_formatter{table};
    return json::parse(buf.str());
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  loop.validate();
  if (corpus.path.empty()) throw ConfigError("corpus.path is required");
  if (embedder.kind == EmbedderKind::kFile && embedder.path.empty()) {
    throw ConfigError("embedder.path is required for kind = \"file\"");
  }
  if (embedder.kind == EmbedderKind::kHttp && embedder.endpoint_url.empty()) {
    throw ConfigError("embedder.endpoint_url is required for kind = \"http\"");
  }
  if (output_dir.empty()) throw ConfigError("run.output_dir must not be empty");
  if (!mock_script && (loop.generator.kind == gateway::BackendKind::kScriptedMock ||
                       loop.evaluator.kind == gateway::BackendKind::kScriptedMock)) {
    throw ConfigError("scripted_mock backends need a mock script (run.mock or --mock)");
  }
}

ExperimentConfig parse_experiment_config(std::string_view text, bool is_json,
                                         const std::filesystem::path& base_dir) {
  const json root = to_json_tree(text, is_json);
  for (auto it = root.begin(); it != root.end(); ++it) {
    static const std::set<std::string> kSections = {"corpus",    "loop",     "prompt", "generator",
                                                    "evaluator", "embedder", "run",    "sweep"};
    if (!kSections.count(it.key())) throw ConfigError("unknown config section [" + it.key() + "]");
  }

  ExperimentConfig config;
  {
    Section s(root, "corpus");
    config.corpus.path = resolve(base_dir, s.string("path", ""));
    if (s.string("path", "").empty()) config.corpus.path.clear();
    const auto format = corpus::parse_corpus_format(s.string("format", "jsonl"));
    if (!format) throw s.error("format", "must be jsonl or csv");
    const auto tag = corpus::parse_dataset_tag(s.string("dataset", "custom"));
    if (!tag) throw s.error("dataset", "must be cnn_dailymail, billsum, arxiv or custom");
    auto& opts = config.corpus.options;
    opts.format = *format;
    opts.dataset_tag = *tag;
    opts.fields = corpus::FieldMap::defaults_for(*tag);
    opts.fields.source = s.string("source_field", opts.fields.source);
    opts.fields.reference = s.string("reference_field", opts.fields.reference);
    opts.fields.id = s.string("id_field", opts.fields.id);
    opts.error_budget = s.count("error_budget", 0);
    s.reject_unknown();
  }
  {
    Section s(root, "loop");
    config.loop.threshold = s.number("threshold", loop::kDefaultThreshold);
    config.loop.max_rounds = static_cast<int>(s.integer("max_rounds", loop::kDefaultMaxRounds));
    config.loop.max_output_tokens = static_cast<int>(s.integer("max_output_tokens", 1024));
    s.reject_unknown();
  }
  config.loop.prompt = read_prompt(root);
  config.loop.generator = read_backend(root, "generator");
  config.loop.evaluator = read_backend(root, "evaluator");
  {
    Section s(root, "embedder");
    const std::string kind = s.string("kind", "one_hot");
    if (kind == "one_hot") {
      config.embedder.kind = EmbedderKind::kOneHot;
    } else if (kind == "file") {
      config.embedder.kind = EmbedderKind::kFile;
    } else if (kind == "http") {
      config.embedder.kind = EmbedderKind::kHttp;
    } else {
      throw s.error("kind", "must be one_hot, file or http");
    }
    if (s.has("path")) config.embedder.path = resolve(base_dir, s.string("path", ""));
    config.embedder.endpoint_url = s.string("endpoint_url", "");
    config.embedder.timeout_seconds = s.number("timeout_s", 60.0);
    s.reject_unknown();
  }
  {
    Section s(root, "run");
    config.output_dir = resolve(base_dir, s.string("output_dir", "out"));
    if (s.has("sample_cap")) config.sample_cap = s.count("sample_cap", 0);
    const std::int64_t seed = s.integer("seed", 0);
    if (seed < 0) throw s.error("seed", "must be >= 0");
    config.seed = static_cast<std::uint64_t>(seed);
    config.parallel = s.count("parallel", 0);
    if (s.has("mock")) config.mock_script = resolve(base_dir, s.string("mock", ""));
    config.failure_budget = s.count("failure_budget", 0);
    s.reject_unknown();
  }
  {
    Section s(root, "sweep");
    if (s.has("thresholds")) {
      const json& list = s.raw("thresholds");
      if (!list.is_array()) throw s.error("thresholds", "must be an array of numbers");
      config.sweep_thresholds.clear();
      for (const json& t : list) {
        if (!t.is_number()) throw s.error("thresholds", "must be an array of numbers");
        config.sweep_thresholds.push_back(t.get<double>());
      }
    }
    s.reject_unknown();
  }
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const bool is_json = path.extension() == ".json";
  return parse_experiment_config(buf.str(), is_json, path.parent_path());
}

}  // namespace sumrefine::harness
