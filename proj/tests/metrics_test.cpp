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

#include <cmath>
#include <random>
#include <set>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "sumrefine/corpus.hpp"
#include "sumrefine/embedders.hpp"
#include "sumrefine/porter_stemmer.hpp"
#include "test_util.hpp"

namespace sumrefine::metrics {
namespace {

using Strings = std::vector<std::string>;
constexpr double kGoldenTolerance = 1e-12;

Strings toks(std::string_view s) { return corpus::tokenize(s); }

double bleu1(std::string_view c, std::string_view r) {
  const std::vector<Strings> refs = {toks(r)};
  return bleu(toks(c), refs);
}

// ---------------------------------------------------------------------------
// Goldens from the independent reference implementation.

struct Golden {
  std::string name;
  std::string candidate;
  std::string reference;
  nlohmann::json expected;
};

std::vector<Golden> load_goldens() {
  const auto pairs = nlohmann::json::parse(testing::read_file(testing::fixture_path("metric_pairs.json")));
  const auto goldens =
      nlohmann::json::parse(testing::read_file(testing::fixture_path("metric_goldens.json")));
  std::vector<Golden> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.push_back({pairs[i]["name"], pairs[i]["candidate"], pairs[i]["reference"], goldens[i]});
  }
  return out;
}

void expect_prf(const PrecisionRecallF1& got, const nlohmann::json& want, const std::string& what) {
  EXPECT_NEAR(got.precision, want[0].get<double>(), kGoldenTolerance) << what;
  EXPECT_NEAR(got.recall, want[1].get<double>(), kGoldenTolerance) << what;
  EXPECT_NEAR(got.f1, want[2].get<double>(), kGoldenTolerance) << what;
}

TEST(Goldens, EveryMetricMatchesTheReferenceImplementation) {
  const auto goldens = load_goldens();
  ASSERT_GE(goldens.size(), 12u);
  OneHotEmbedder onehot;
  for (const Golden& g : goldens) {
    ASSERT_EQ(g.expected["name"], g.name);
    for (int n = 1; n <= 5; ++n) {
      expect_prf(rouge_n(g.candidate, g.reference, n), g.expected["rouge_n"][n - 1],
                 g.name + " rouge" + std::to_string(n));
    }
    expect_prf(rouge_l(g.candidate, g.reference), g.expected["rouge_l"], g.name + " rougeL");
    EXPECT_NEAR(bleu1(g.candidate, g.reference), g.expected["bleu"].get<double>(),
                kGoldenTolerance) << g.name;
    EXPECT_NEAR(meteor_simplified(g.candidate, g.reference), g.expected["meteor"].get<double>(),
                kGoldenTolerance) << g.name;
    if (g.expected["bertscore"].is_null()) {
      EXPECT_THROW(bert_score(g.candidate, g.reference, onehot), UndefinedMetricError);
    } else {
      expect_prf(bert_score(g.candidate, g.reference, onehot), g.expected["bertscore"],
                 g.name + " bertscore");
    }
    const auto values = evaluate_pair(g.candidate, g.reference, onehot).metrics.values();
    for (std::size_t i = 0; i < kMetricCount; ++i) {
      EXPECT_NEAR(values[i], g.expected["vector"][i].get<double>(), kGoldenTolerance)
          << g.name << " " << kMetricColumns[i];
    }
  }
}

// ---------------------------------------------------------------------------
// ROUGE

TEST(RougeN, Examples) {
  const auto r = rouge_n("the cat", "the cat sat", 1);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_DOUBLE_EQ(r.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.f1, 0.8);
  for (int n = 1; n <= 4; ++n) {
    const auto same = rouge_n("a b c d", "a b c d", n);
    EXPECT_EQ(same.precision, 1.0);
    EXPECT_EQ(same.f1, 1.0);
  }
  const auto big = rouge_n("a b", "a b c", 4);
  EXPECT_EQ(big.precision, 0.0);
  EXPECT_EQ(big.f1, 0.0);
  EXPECT_THROW(rouge_n("a", "a", 0), PreconditionError);
}

TEST(RougeN, ClippedMultisetOverlap) {
  const auto r = rouge_n("the the the", "the cat the", 1);
  EXPECT_DOUBLE_EQ(r.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.recall, 2.0 / 3.0);
}

TEST(RougeN, AntitoneInNForContiguousSubsequence) {
  const Strings ref = toks("one two three four five six seven eight nine ten eleven");
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t start = rng() % 6;
    const std::size_t len = 1 + rng() % (ref.size() - start);
    const Strings cand(ref.begin() + static_cast<long>(start), ref.begin() + static_cast<long>(start + len));
    for (int n = 1; n < 5; ++n) {
      EXPECT_GE(rouge_n(cand, ref, n).f1, rouge_n(cand, ref, n + 1).f1);
    }
  }
}

TEST(RougeL, Examples) {
  const auto r = rouge_l("a b c d", "a c b d");
  EXPECT_EQ(lcs_length(toks("a b c d"), toks("a c b d")), 3u);
  EXPECT_EQ(r.precision, 0.75);
  EXPECT_EQ(r.recall, 0.75);
  EXPECT_EQ(r.f1, 0.75);
  EXPECT_EQ(rouge_l("x y z", "x y z").f1, 1.0);
  EXPECT_EQ(rouge_l("x y", "p q").f1, 0.0);
  EXPECT_EQ(rouge_l("", "p q").f1, 0.0);
}

std::size_t lcs_bruteforce(const Strings& a, const Strings& b) {
  std::size_t best = 0;
  for (unsigned mask = 0; mask < (1u << a.size()); ++mask) {
    const auto bits = static_cast<std::size_t>(__builtin_popcount(mask));
    if (bits <= best) continue;
    std::size_t j = 0;
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      while (j < b.size() && b[j] != a[i]) ++j;
      if (j == b.size()) ok = false;
      else ++j;
    }
    if (ok) best = bits;
  }
  return best;
}

TEST(RougeL, MatchesExhaustiveSubsequenceOracle) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const Strings a = testing::random_tokens(rng, 8, 4);
    const Strings b = testing::random_tokens(rng, 8, 4);
    const std::size_t lcs = lcs_bruteforce(a, b);
    ASSERT_EQ(lcs_length(a, b), lcs);
    const auto r = rouge_l(a, b);
    const double p = a.empty() ? 0.0 : static_cast<double>(lcs) / static_cast<double>(a.size());
    const double rc = b.empty() ? 0.0 : static_cast<double>(lcs) / static_cast<double>(b.size());
    EXPECT_EQ(r.f1, harmonic_mean(p, rc));
  }
}

TEST(Rouge, SymmetryAndCasefold) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    const Strings a = testing::random_tokens(rng, 10, 5);
    const Strings b = testing::random_tokens(rng, 10, 5);
    for (int n = 1; n <= 5; ++n) {
      EXPECT_EQ(rouge_n(a, b, n).precision, rouge_n(b, a, n).recall);
      EXPECT_EQ(rouge_n(a, b, n).f1, rouge_n(b, a, n).f1);
    }
    EXPECT_EQ(rouge_l(a, b).precision, rouge_l(b, a).recall);
  }
  OneHotEmbedder onehot;
  const std::string mixed = "The QUICK Brown fox Jumps";
  const std::string lower = "the quick brown fox jumps";
  const std::string ref = "A quick brown DOG jumps over";
  EXPECT_EQ(evaluate_pair(mixed, ref, onehot).metrics, evaluate_pair(lower, ref, onehot).metrics);
}

// ---------------------------------------------------------------------------
// BLEU

TEST(Bleu, Examples) {
  EXPECT_EQ(bleu1("a b c d e", "a b c d e"), 1.0);
  EXPECT_EQ(bleu1("", "a b"), 0.0);

  const std::vector<Strings> refs = {toks("the cat")};
  const BleuBreakdown clip = bleu_breakdown(toks("the the the the"), refs);
  EXPECT_EQ(clip.precisions.at(0), 0.25);

  const std::vector<Strings> long_ref = {toks("the cat sat down")};
  const BleuBreakdown bp = bleu_breakdown(toks("the cat"), long_ref);
  EXPECT_EQ(bp.precisions, (std::vector<double>{1.0, 1.0}));
  EXPECT_DOUBLE_EQ(bp.brevity_penalty, std::exp(-1.0));
  EXPECT_NEAR(bp.brevity_penalty, 0.3679, 5e-5);
  EXPECT_DOUBLE_EQ(bp.score, std::exp(-1.0));

  EXPECT_THROW(bleu(toks("a"), std::vector<Strings>{}), PreconditionError);
}

TEST(Bleu, ClosestReferenceLengthShorterWinsTies) {
  const std::vector<Strings> refs = {toks("a b c d e f"), toks("a b"), toks("a b c d e f g h")};
  EXPECT_EQ(bleu_breakdown(toks("a b c d"), refs).reference_length, 2u);
  const std::vector<Strings> refs2 = {toks("a b c d e f g h i"), toks("a b c d e f g")};
  EXPECT_EQ(bleu_breakdown(toks("a b c d e f g h"), refs2).reference_length, 7u);
}

TEST(Bleu, BoundedByLargestPrecisionAndOne) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 500; ++trial) {
    const Strings c = testing::random_tokens(rng, 9, 3);
    const std::vector<Strings> refs = {testing::random_tokens(rng, 9, 3),
                                       testing::random_tokens(rng, 9, 3)};
    const BleuBreakdown b = bleu_breakdown(c, refs);
    EXPECT_GE(b.score, 0.0);
    EXPECT_LE(b.score, 1.0);
    if (!c.empty()) {
      EXPECT_LE(b.score, *std::max_element(b.precisions.begin(), b.precisions.end()) * (1 + 1e-12));
    }
  }
}

TEST(Bleu, CanExceedUnigramPrecision) {
  // Higher-order precisions above p1 lift the geometric mean past it.
  const std::vector<Strings> refs = {toks("1 1 1 0 0 1 1")};
  const BleuBreakdown b = bleu_breakdown(toks("1 0 0 1 1 1 0 0"), refs);
  EXPECT_EQ(b.precisions.at(0), 0.75);
  EXPECT_GT(b.score, b.precisions.at(0));
  EXPECT_NEAR(b.score, 0.7731, 5e-5);
}

// ---------------------------------------------------------------------------
// METEOR

TEST(Meteor, ClosedForms) {
  const MeteorAlignment one = meteor_alignment(toks("cat"), toks("cat"));
  EXPECT_EQ(one.matches, 1u);
  EXPECT_EQ(one.chunks, 1u);
  EXPECT_EQ(one.f_mean, 1.0);
  EXPECT_EQ(one.penalty, 0.5);
  EXPECT_EQ(one.score, 0.5);

  const std::string ten = "one two three four five six seven eight nine ten";
  const MeteorAlignment m = meteor_alignment(toks(ten), toks(ten));
  EXPECT_EQ(m.chunks, 1u);
  EXPECT_DOUBLE_EQ(m.penalty, 0.0005);
  EXPECT_DOUBLE_EQ(m.score, 0.9995);

  EXPECT_EQ(meteor_simplified("a b", "c d"), 0.0);
  EXPECT_EQ(meteor_simplified("", "c d"), 0.0);
}

TEST(Meteor, StemStageAndChunks) {
  const MeteorAlignment m = meteor_alignment(toks("running dogs"), toks("dog runs"));
  EXPECT_EQ(m.matches, 2u);
  EXPECT_EQ(m.chunks, 2u);
  EXPECT_EQ(m.alignment, (std::vector<int>{1, 0}));

  const MeteorAlignment rev = meteor_alignment(toks("d c b a"), toks("a b c d"));
  EXPECT_EQ(rev.matches, 4u);
  EXPECT_EQ(rev.chunks, 4u);
  const double f = 1.0;
  EXPECT_DOUBLE_EQ(rev.score, f * (1 - 0.5));
}

TEST(Meteor, PrefersLongRunsOverEarlyIsolatedMatches) {
  // Greedy left-to-right would align the first "a" and split the run.
  const MeteorAlignment m = meteor_alignment(toks("a x a b c"), toks("a b c"));
  EXPECT_EQ(m.matches, 3u);
  EXPECT_EQ(m.chunks, 1u);
  EXPECT_EQ(m.alignment, (std::vector<int>{-1, -1, 0, 1, 2}));
}

TEST(Meteor, MatchCountIsMaximalAndScoreBounded) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 300; ++trial) {
    const Strings c = testing::random_tokens(rng, 9, 4);
    const Strings r = testing::random_tokens(rng, 9, 4);
    const MeteorAlignment m = meteor_alignment(c, r);
    std::map<std::string, std::size_t> cc, rc;
    for (const auto& t : c) ++cc[t];
    for (const auto& t : r) ++rc[t];
    std::size_t max_matches = 0;
    for (const auto& [t, n] : cc) max_matches += std::min(n, rc[t]);
    EXPECT_EQ(m.matches, max_matches);
    EXPECT_GE(m.score, 0.0);
    EXPECT_LE(m.score, 1.0);
    std::set<int> used;
    for (int a : m.alignment) {
      if (a >= 0) {
        EXPECT_TRUE(used.insert(a).second);
      }
    }
  }
}

TEST(PorterStemmer, MatchesNltkFixture) {
  std::istringstream in(testing::read_file(testing::fixture_path("porter_stems.tsv")));
  std::string word, stem;
  std::size_t n = 0;
  while (in >> word >> stem) {
    EXPECT_EQ(porter_stem(word), stem) << word;
    ++n;
  }
  EXPECT_GT(n, 1000u);
  EXPECT_EQ(porter_stem("as"), "as");
  EXPECT_EQ(porter_stem("état"), "état");
  EXPECT_EQ(porter_stem("2024"), "2024");
}

// ---------------------------------------------------------------------------
// BERTScore

TEST(BertScore, OneHotExamples) {
  OneHotEmbedder e;
  const auto r = bert_score("a b", "a c", e);
  EXPECT_EQ(r.precision, 0.5);
  EXPECT_EQ(r.recall, 0.5);
  EXPECT_EQ(r.f1, 0.5);
  EXPECT_EQ(bert_score("x y z", "x y z", e).f1, 1.0);
  EXPECT_EQ(bert_score("p q", "r s", e).f1, 0.0);
  EXPECT_THROW(bert_score("", "r s", e), UndefinedMetricError);
}

TEST(BertScore, OneHotEqualsUnigramSetOverlap) {
  std::mt19937_64 rng(56);
  OneHotEmbedder e;
  for (int trial = 0; trial < 500; ++trial) {
    Strings c = testing::random_tokens(rng, 10, 12);
    Strings r = testing::random_tokens(rng, 10, 12);
    if (c.empty()) c.push_back("w0");
    if (r.empty()) r.push_back("w1");
    const std::set<std::string> cs(c.begin(), c.end()), rs(r.begin(), r.end());
    std::size_t in_ref = 0, in_cand = 0;
    for (const auto& t : c) in_ref += rs.count(t);
    for (const auto& t : r) in_cand += cs.count(t);
    const auto got = bert_score(c, r, e);
    EXPECT_EQ(got.precision, static_cast<double>(in_ref) / static_cast<double>(c.size()));
    EXPECT_EQ(got.recall, static_cast<double>(in_cand) / static_cast<double>(r.size()));
  }
}

TEST(BertScore, IdenticalTextsScoreOneForAnyUnitEmbedder) {
  testing::TempDir dir("vec");
  testing::write_file(dir / "v.txt", "2 3\nthe 1 0 0\ncat 0.6 0.8 0\n");
  VectorFileEmbedder e(dir / "v.txt");
  const auto r = bert_score("the cat sat on the mat", "the cat sat on the mat", e);
  EXPECT_NEAR(r.f1, 1.0, 1e-12);
  const auto near = bert_score("the", "cat", e);
  EXPECT_NEAR(near.precision, 0.6, 1e-12);
}

TEST(GreedyMatch, RowAndColumnMaxima) {
  Eigen::MatrixXd sim(2, 3);
  sim << 0.9, 0.1, 0.2,
         0.3, 0.4, 0.8;
  const auto r = greedy_match(sim);
  EXPECT_DOUBLE_EQ(r.precision, (0.9 + 0.8) / 2);
  EXPECT_DOUBLE_EQ(r.recall, (0.9 + 0.4 + 0.8) / 3);
  EXPECT_THROW(greedy_match(Eigen::MatrixXd(0, 2)), UndefinedMetricError);
}

class BadEmbedder final : public TokenEmbedder {
 public:
  Eigen::MatrixXd embed(Tokens tokens) const override {
    return Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(tokens.size()), 2, 1.0);
  }
};

TEST(BertScore, RejectsNonUnitEmbeddings) {
  EXPECT_THROW(bert_score("a", "b", BadEmbedder{}), PreconditionError);
}

TEST(VectorFileEmbedder, FallbackIsDeterministicUnitNorm) {
  testing::TempDir dir("vec");
  testing::write_file(dir / "v.txt", "alpha 3 4\nbeta 0 2\n");
  VectorFileEmbedder e(dir / "v.txt");
  EXPECT_EQ(e.dimension(), 2);
  const Strings t = {"alpha", "unknown", "unknown"};
  const Eigen::MatrixXd m = e.embed(t);
  EXPECT_DOUBLE_EQ(m(0, 0), 0.6);
  EXPECT_NEAR(m.row(1).norm(), 1.0, 1e-12);
  EXPECT_EQ(m.row(1), m.row(2));
  EXPECT_EQ(m, VectorFileEmbedder(dir / "v.txt").embed(t));

  testing::write_file(dir / "bad.txt", "alpha 1 2\nbeta 1\n");
  EXPECT_THROW(VectorFileEmbedder(dir / "bad.txt"), ConfigError);
  testing::write_file(dir / "zero.txt", "alpha 0 0\n");
  EXPECT_THROW(VectorFileEmbedder(dir / "zero.txt"), PreconditionError);
  EXPECT_THROW(VectorFileEmbedder(dir / "missing.txt"), ConfigError);
}

TEST(HttpEmbedder, PostsTokensAndNormalizesRows) {
  httplib::Server server;
  server.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    nlohmann::json vectors = nlohmann::json::array();
    for (const auto& t : body["tokens"]) {
      vectors.push_back(t == "a" ? nlohmann::json{2.0, 0.0} : nlohmann::json{0.0, 5.0});
    }
    res.set_content(nlohmann::json{{"vectors", vectors}}.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpEmbedder e("http://127.0.0.1:" + std::to_string(port) + "/embed", std::chrono::seconds(5));
  const auto r = bert_score("a b", "a", e);
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.recall, 1.0);
  server.stop();
  th.join();
}

// ---------------------------------------------------------------------------
// Aggregation

TEST(EvaluatePair, IdenticalAndEmpty) {
  OneHotEmbedder e;
  const std::string text = "officials said the bridge will reopen next week";
  const MetricVector same = evaluate_pair(text, text, e).metrics;
  for (double v : same.rouge_n_f1) EXPECT_EQ(v, 1.0);
  EXPECT_EQ(same.rouge_l_f1, 1.0);
  EXPECT_EQ(same.bleu, 1.0);
  EXPECT_EQ(same.bertscore_f1, 1.0);
  EXPECT_DOUBLE_EQ(same.meteor, 1.0 - 0.5 * std::pow(1.0 / 8.0, 3));

  const PairEvaluation empty = evaluate_pair("", text, e);
  EXPECT_EQ(empty.metrics, MetricVector{});
  EXPECT_EQ(empty.warnings.size(), 1u);
}

TEST(MetricVector, ValuesRoundTripAndMean) {
  MetricVector a;
  a.rouge_n_f1 = {0.1, 0.2, 0.3, 0.4, 0.5};
  a.rouge_l_f1 = 0.6;
  a.bleu = 0.7;
  a.meteor = 0.8;
  a.bertscore_f1 = 0.9;
  EXPECT_EQ(MetricVector::from_values(a.values()), a);
  EXPECT_EQ(a.values()[6], 0.7);
  const std::vector<MetricVector> two = {a, MetricVector{}};
  EXPECT_DOUBLE_EQ(mean_metrics(two).bertscore_f1, 0.45);
  EXPECT_EQ(mean_metrics({}), MetricVector{});
}

}  // namespace
}  // namespace sumrefine::metrics
