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

#include "sumrefine/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

#include "sumrefine/corpus.hpp"
#include "sumrefine/porter_stemmer.hpp"

namespace sumrefine::metrics {
namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts count_ngrams(Tokens tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

std::size_t total(const NgramCounts& counts) {
  std::size_t t = 0;
  for (const auto& [_, c] : counts) t += c;
  return t;
}

std::size_t clipped_overlap(const NgramCounts& candidate, const NgramCounts& reference) {
  std::size_t overlap = 0;
  for (const auto& [gram, c] : candidate) {
    auto it = reference.find(gram);
    if (it != reference.end()) overlap += std::min(c, it->second);
  }
  return overlap;
}

PrecisionRecallF1 from_counts(std::size_t overlap, std::size_t candidate_total,
                              std::size_t reference_total) {
  PrecisionRecallF1 out;
  if (candidate_total == 0 || reference_total == 0) return out;
  out.precision = static_cast<double>(overlap) / static_cast<double>(candidate_total);
  out.recall = static_cast<double>(overlap) / static_cast<double>(reference_total);
  out.f1 = harmonic_mean(out.precision, out.recall);
  return out;
}

// One alignment stage over `keys`: repeatedly take the longest run of equal
// keys among still-unaligned positions.
void align_longest_runs(const std::vector<std::string>& cand_keys,
                        const std::vector<std::string>& ref_keys, std::vector<int>& alignment,
                        std::vector<bool>& ref_used) {
  const std::size_t m = cand_keys.size();
  const std::size_t n = ref_keys.size();
  std::vector<std::size_t> run((m + 1) * (n + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return run[i * (n + 1) + j]; };

  while (true) {
    std::fill(run.begin(), run.end(), 0);
    std::size_t best_len = 0;
    std::size_t best_i = 0;
    std::size_t best_j = 0;
    for (std::size_t i = m; i-- > 0;) {
      for (std::size_t j = n; j-- > 0;) {
        if (alignment[i] >= 0 || ref_used[j] || cand_keys[i] != ref_keys[j]) continue;
        at(i, j) = 1 + at(i + 1, j + 1);
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (at(i, j) > best_len) {
          best_len = at(i, j);
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_len == 0) return;
    for (std::size_t t = 0; t < best_len; ++t) {
      alignment[best_i + t] = static_cast<int>(best_j + t);
      ref_used[best_j + t] = true;
    }
  }
}

}  // namespace

double harmonic_mean(double precision, double recall) {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

PrecisionRecallF1 rouge_n(Tokens candidate, Tokens reference, int n) {
  if (n < 1) throw PreconditionError("ROUGE-N needs n >= 1");
  const auto un = static_cast<std::size_t>(n);
  const NgramCounts c = count_ngrams(candidate, un);
  const NgramCounts r = count_ngrams(reference, un);
  return from_counts(clipped_overlap(c, r), total(c), total(r));
}

PrecisionRecallF1 rouge_n(std::string_view candidate, std::string_view reference, int n) {
  return rouge_n(corpus::tokenize(candidate), corpus::tokenize(reference), n);
}

std::size_t lcs_length(Tokens a, Tokens b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

PrecisionRecallF1 rouge_l(Tokens candidate, Tokens reference) {
  return from_counts(lcs_length(candidate, reference), candidate.size(), reference.size());
}

PrecisionRecallF1 rouge_l(std::string_view candidate, std::string_view reference) {
  return rouge_l(corpus::tokenize(candidate), corpus::tokenize(reference));
}

BleuBreakdown bleu_breakdown(Tokens candidate,
                             std::span<const std::vector<std::string>> references) {
  if (references.empty()) throw PreconditionError("BLEU needs at least one reference");
  BleuBreakdown out;
  out.candidate_length = candidate.size();
  if (candidate.empty()) return out;

  const std::size_t c = candidate.size();
  out.reference_length = references.front().size();
  for (const auto& ref : references) {
    const auto diff = [c](std::size_t len) { return len > c ? len - c : c - len; };
    if (diff(ref.size()) < diff(out.reference_length) ||
        (diff(ref.size()) == diff(out.reference_length) && ref.size() < out.reference_length)) {
      out.reference_length = ref.size();
    }
  }

  const std::size_t max_order = std::min<std::size_t>(kBleuMaxOrder, c);
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_order; ++n) {
    const NgramCounts cand = count_ngrams(candidate, n);
    NgramCounts max_ref;
    for (const auto& ref : references) {
      for (auto& [gram, count] : count_ngrams(ref, n)) {
        std::size_t& slot = max_ref[gram];
        slot = std::max(slot, count);
      }
    }
    const std::size_t clipped = clipped_overlap(cand, max_ref);
    const double numerator = clipped == 0 ? kBleuEpsilon : static_cast<double>(clipped);
    const double p = numerator / static_cast<double>(total(cand));
    out.precisions.push_back(p);
    log_sum += std::log(p);
  }

  out.brevity_penalty =
      std::min(1.0, std::exp(1.0 - static_cast<double>(out.reference_length) /
                                       static_cast<double>(c)));
  out.score = out.brevity_penalty * std::exp(log_sum / static_cast<double>(max_order));
  return out;
}

double bleu(Tokens candidate, std::span<const std::vector<std::string>> references) {
  return bleu_breakdown(candidate, references).score;
}

double bleu(std::string_view candidate, std::span<const std::string> references) {
  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (const std::string& r : references) refs.push_back(corpus::tokenize(r));
  return bleu(corpus::tokenize(candidate), refs);
}

MeteorAlignment meteor_alignment(Tokens candidate, Tokens reference) {
  MeteorAlignment out;
  out.alignment.assign(candidate.size(), -1);
  std::vector<bool> ref_used(reference.size(), false);

  const std::vector<std::string> cand_exact(candidate.begin(), candidate.end());
  const std::vector<std::string> ref_exact(reference.begin(), reference.end());
  align_longest_runs(cand_exact, ref_exact, out.alignment, ref_used);

  std::vector<std::string> cand_stems;
  std::vector<std::string> ref_stems;
  cand_stems.reserve(candidate.size());
  ref_stems.reserve(reference.size());
  for (const std::string& t : candidate) cand_stems.push_back(porter_stem(t));
  for (const std::string& t : reference) ref_stems.push_back(porter_stem(t));
  align_longest_runs(cand_stems, ref_stems, out.alignment, ref_used);

  for (std::size_t i = 0; i < out.alignment.size(); ++i) {
    if (out.alignment[i] < 0) continue;
    ++out.matches;
    const bool continues = i > 0 && out.alignment[i - 1] >= 0 &&
                           out.alignment[i - 1] + 1 == out.alignment[i];
    if (!continues) ++out.chunks;
  }
  if (out.matches == 0) return out;

  const auto m = static_cast<double>(out.matches);
  out.precision = m / static_cast<double>(candidate.size());
  out.recall = m / static_cast<double>(reference.size());
  out.f_mean = out.precision * out.recall /
               (kMeteorAlpha * out.precision + (1.0 - kMeteorAlpha) * out.recall);
  out.penalty = kMeteorGamma * std::pow(static_cast<double>(out.chunks) / m, kMeteorBeta);
  out.score = out.f_mean * (1.0 - out.penalty);
  return out;
}

double meteor_simplified(Tokens candidate, Tokens reference) {
  return meteor_alignment(candidate, reference).score;
}

double meteor_simplified(std::string_view candidate, std::string_view reference) {
  return meteor_simplified(corpus::tokenize(candidate), corpus::tokenize(reference));
}

PrecisionRecallF1 bert_score(Tokens candidate, Tokens reference, const TokenEmbedder& embedder) {
  if (candidate.empty() || reference.empty()) {
    throw UndefinedMetricError("BERTScore is undefined for an empty token sequence");
  }
  Eigen::MatrixXd cand = embedder.embed(candidate);
  Eigen::MatrixXd ref = embedder.embed(reference);
  if (static_cast<std::size_t>(cand.rows()) != candidate.size() ||
      static_cast<std::size_t>(ref.rows()) != reference.size()) {
    throw PreconditionError("embedder returned a row count different from the token count");
  }
  constexpr double kNormTolerance = 1e-6;
  if (((cand.rowwise().norm().array() - 1.0).abs() > kNormTolerance).any() ||
      ((ref.rowwise().norm().array() - 1.0).abs() > kNormTolerance).any()) {
    throw PreconditionError("embedder returned vectors that are not unit-norm");
  }

  const Eigen::Index dim = std::max(cand.cols(), ref.cols());
  auto pad = [dim](Eigen::MatrixXd& m) {
    const Eigen::Index old = m.cols();
    if (old == dim) return;
    m.conservativeResize(Eigen::NoChange, dim);
    m.rightCols(dim - old).setZero();
  };
  pad(cand);
  pad(ref);
  return greedy_match(cand * ref.transpose());
}

PrecisionRecallF1 bert_score(std::string_view candidate, std::string_view reference,
                             const TokenEmbedder& embedder) {
  return bert_score(corpus::tokenize(candidate), corpus::tokenize(reference), embedder);
}

std::array<double, kMetricCount> MetricVector::values() const {
  return {rouge_n_f1[0], rouge_n_f1[1], rouge_n_f1[2], rouge_n_f1[3], rouge_n_f1[4],
          rouge_l_f1,    bleu,          meteor,        bertscore_f1};
}

MetricVector MetricVector::from_values(const std::array<double, kMetricCount>& v) {
  MetricVector out;
  std::copy(v.begin(), v.begin() + 5, out.rouge_n_f1.begin());
  out.rouge_l_f1 = v[5];
  out.bleu = v[6];
  out.meteor = v[7];
  out.bertscore_f1 = v[8];
  return out;
}

PairEvaluation evaluate_pair(std::string_view candidate, std::string_view reference,
                             const TokenEmbedder& embedder) {
  const std::vector<std::string> cand = corpus::tokenize(candidate);
  const std::vector<std::string> ref = corpus::tokenize(reference);
  PairEvaluation out;
  for (int n = 1; n <= 5; ++n) {
    out.metrics.rouge_n_f1[static_cast<std::size_t>(n - 1)] = rouge_n(cand, ref, n).f1;
  }
  out.metrics.rouge_l_f1 = rouge_l(cand, ref).f1;
  const std::vector<std::vector<std::string>> refs{ref};
  out.metrics.bleu = bleu(cand, refs);
  out.metrics.meteor = meteor_simplified(cand, ref);
  try {
    out.metrics.bertscore_f1 = bert_score(cand, ref, embedder).f1;
  } catch (const UndefinedMetricError& e) {
    out.metrics.bertscore_f1 = 0.0;
    out.warnings.push_back(std::string("Bertscore recorded as 0: ") + e.what());
  }
  return out;
}

MetricVector mean_metrics(std::span<const MetricVector> vectors) {
  std::array<double, kMetricCount> sum{};
  if (vectors.empty()) return MetricVector{};
  for (const MetricVector& v : vectors) {
    const auto vals = v.values();
    for (std::size_t i = 0; i < kMetricCount; ++i) sum[i] += vals[i];
  }
  for (double& s : sum) s /= static_cast<double>(vectors.size());
  return MetricVector::from_values(sum);
}

}  // namespace sumrefine::metrics
