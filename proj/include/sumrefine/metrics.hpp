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

// Summary-quality metrics: ROUGE-1..5, ROUGE-L, BLEU, simplified METEOR and
// BERTScore. All text overloads tokenize with corpus::tokenize, so every
// metric is insensitive to case and punctuation.

#ifndef SUMREFINE_METRICS_HPP
#define SUMREFINE_METRICS_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sumrefine/error.hpp"

namespace sumrefine::metrics {

using Tokens = std::span<const std::string>;

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// 2PR/(P+R), or 0 when P+R is 0.
double harmonic_mean(double precision, double recall);

/// Clipped n-gram multiset overlap. Zero n-grams on either side gives all
/// zeros. Throws PreconditionError for n < 1.
PrecisionRecallF1 rouge_n(Tokens candidate, Tokens reference, int n);
PrecisionRecallF1 rouge_n(std::string_view candidate, std::string_view reference, int n);

std::size_t lcs_length(Tokens a, Tokens b);

/// LCS-based precision/recall/F1; an empty side gives all zeros.
PrecisionRecallF1 rouge_l(Tokens candidate, Tokens reference);
PrecisionRecallF1 rouge_l(std::string_view candidate, std::string_view reference);

inline constexpr int kBleuMaxOrder = 4;
inline constexpr double kBleuEpsilon = 1e-9;

struct BleuBreakdown {
  /// Smoothed clipped precision per order 1..N, N = min(4, |candidate|).
  std::vector<double> precisions;
  std::size_t candidate_length = 0;
  /// Closest reference length (shorter wins ties).
  std::size_t reference_length = 0;
  double brevity_penalty = 0.0;
  double score = 0.0;
};

/// Sentence BLEU with add-epsilon smoothing of zero clipped counts and the
/// brevity penalty min(1, exp(1 - r/c)). An empty candidate scores 0.
/// Throws PreconditionError when `references` is empty.
BleuBreakdown bleu_breakdown(Tokens candidate, std::span<const std::vector<std::string>> references);
double bleu(Tokens candidate, std::span<const std::vector<std::string>> references);
double bleu(std::string_view candidate, std::span<const std::string> references);

/// METEOR recall weighting: F_mean = PR / (alpha P + (1 - alpha) R).
inline constexpr double kMeteorAlpha = 0.9;
inline constexpr double kMeteorGamma = 0.5;
inline constexpr double kMeteorBeta = 3.0;

struct MeteorAlignment {
  /// alignment[i] is the reference index matched by candidate token i, or -1.
  std::vector<int> alignment;
  std::size_t matches = 0;
  std::size_t chunks = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_mean = 0.0;
  double penalty = 0.0;
  double score = 0.0;
};

/// Unigram alignment in two stages, exact tokens then Porter stems over the
/// tokens left unmatched. Each stage repeatedly aligns the longest run of
/// consecutive matching tokens (earliest candidate, then earliest reference
/// position on ties), which yields the maximum match count and favours few
/// chunks. Score = F_mean * (1 - 0.5 (chunks/matches)^3); zero matches give 0.
MeteorAlignment meteor_alignment(Tokens candidate, Tokens reference);
double meteor_simplified(Tokens candidate, Tokens reference);
double meteor_simplified(std::string_view candidate, std::string_view reference);

/// Maps a token sequence to one unit-norm row per token.
///
/// Implementations document their own thread-safety; all bundled ones are
/// safe to share. An embedder may grow its dimension between calls as long
/// as existing coordinates keep their meaning (zero-padding is applied).
class TokenEmbedder {
 public:
  virtual ~TokenEmbedder() = default;
  virtual Eigen::MatrixXd embed(Tokens tokens) const = 0;
};

/// Greedy matching over a cosine-similarity matrix (rows: candidate tokens,
/// columns: reference tokens). Precision averages row maxima, recall
/// averages column maxima.
template <typename Derived>
PrecisionRecallF1 greedy_match(const Eigen::MatrixBase<Derived>& similarity) {
  if (similarity.rows() == 0 || similarity.cols() == 0) {
    throw UndefinedMetricError("greedy matching needs tokens on both sides");
  }
  PrecisionRecallF1 out;
  out.precision = similarity.rowwise().maxCoeff().mean();
  out.recall = similarity.colwise().maxCoeff().mean();
  out.f1 = harmonic_mean(out.precision, out.recall);
  return out;
}

/// BERTScore without idf weighting or baseline rescaling. Throws
/// UndefinedMetricError if either side has no tokens and PreconditionError if
/// the embedder breaks its unit-norm contract.
PrecisionRecallF1 bert_score(Tokens candidate, Tokens reference, const TokenEmbedder& embedder);
PrecisionRecallF1 bert_score(std::string_view candidate, std::string_view reference,
                             const TokenEmbedder& embedder);

inline constexpr std::size_t kMetricCount = 9;
/// Column order of every metric table.
inline constexpr std::array<std::string_view, kMetricCount> kMetricColumns = {
    "Rouge1", "Rouge2", "Rouge3", "Rouge4", "Rouge5", "RougeL", "Bleu", "Meteor", "Bertscore",
};

struct MetricVector {
  std::array<double, 5> rouge_n_f1{};
  double rouge_l_f1 = 0.0;
  double bleu = 0.0;
  double meteor = 0.0;
  double bertscore_f1 = 0.0;

  /// Values in kMetricColumns order.
  std::array<double, kMetricCount> values() const;
  static MetricVector from_values(const std::array<double, kMetricCount>& v);

  friend bool operator==(const MetricVector&, const MetricVector&) = default;
};

struct PairEvaluation {
  MetricVector metrics;
  std::vector<std::string> warnings;
};

/// All nine metrics for one pair. An undefined BERTScore (empty side) is
/// recorded as 0 with a warning; the other metrics never fail.
PairEvaluation evaluate_pair(std::string_view candidate, std::string_view reference,
                             const TokenEmbedder& embedder);

/// Element-wise arithmetic mean; all zeros for an empty input.
MetricVector mean_metrics(std::span<const MetricVector> vectors);

}  // namespace sumrefine::metrics

#endif  // SUMREFINE_METRICS_HPP
