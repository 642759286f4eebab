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

#ifndef SUMREFINE_EMBEDDERS_HPP
#define SUMREFINE_EMBEDDERS_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <unordered_map>

#include "sumrefine/metrics.hpp"

namespace sumrefine::metrics {

/// Each distinct token gets its own basis vector, so cosine similarity is
/// token equality and BERTScore collapses to unigram set overlap. The
/// vocabulary grows on demand; indices are assigned in first-seen order.
/// Thread-safe.
class OneHotEmbedder final : public TokenEmbedder {
 public:
  Eigen::MatrixXd embed(Tokens tokens) const override;
  std::size_t vocabulary_size() const;

 private:
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, Eigen::Index> index_;
};

/// Vectors read from a word2vec-style text file: optional "<count> <dim>"
/// header, then "<token> <v1> ... <vd>" per line. Vectors are normalized on
/// load. Tokens missing from the file get a deterministic pseudo-random unit
/// vector derived from the token bytes. Immutable after construction.
class VectorFileEmbedder final : public TokenEmbedder {
 public:
  /// Throws ConfigError on an unreadable or inconsistent file.
  explicit VectorFileEmbedder(const std::filesystem::path& path);

  Eigen::MatrixXd embed(Tokens tokens) const override;
  Eigen::Index dimension() const { return dim_; }

 private:
  Eigen::VectorXd fallback_vector(const std::string& token) const;

  Eigen::Index dim_ = 0;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

/// Remote embedder: POST {"tokens": [...]} and expect
/// {"vectors": [[...], ...]} with one row per token. Rows are normalized.
/// Thread-safe (one HTTP client per call).
class HttpEmbedder final : public TokenEmbedder {
 public:
  explicit HttpEmbedder(std::string endpoint_url,
                        std::chrono::duration<double> timeout = std::chrono::seconds(60));

  Eigen::MatrixXd embed(Tokens tokens) const override;

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::chrono::duration<double> timeout_;
};

/// Normalizes each row to unit length. Zero rows are rejected with
/// PreconditionError.
void normalize_rows(Eigen::MatrixXd& m);

}  // namespace sumrefine::metrics

#endif  // SUMREFINE_EMBEDDERS_HPP
