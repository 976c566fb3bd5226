#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "smf/error.h"
#include "smf/ling_metrics.h"
#include "smf/ling_report.h"
#include "smf/text_util.h"
#include "synthetic.h"

namespace smf {
namespace {

Transcript words(std::vector<std::string> tokens) {
  Transcript t;
  for (const auto& w : tokens) t.raw += (t.raw.empty() ? "" : " ") + w;
  t.tokens = std::move(tokens);
  return t;
}

std::size_t dp_oracle(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
  return d[a.size()][b.size()];
}

Transcript random_words(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len) {
  static const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f"};
  const std::size_t n = min_len + rng() % (max_len - min_len + 1);
  std::vector<std::string> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back(vocab[rng() % vocab.size()]);
  return words(t);
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("The CAT sat.").tokens, (std::vector<std::string>{"the", "cat", "sat"}));
  EXPECT_TRUE(tokenize("").tokens.empty());
  EXPECT_EQ(tokenize("don't stop").tokens, (std::vector<std::string>{"dont", "stop"}));
}

TEST(Tokenize, UnicodePunctuationAndCase) {
  EXPECT_EQ(tokenize("\xC2\xBFQU\xC3\x89? \xE2\x80\x9Chola\xE2\x80\x9D\xE2\x80\xA6").tokens,
            (std::vector<std::string>{"qu\xC3\xA9", "hola"}));
  EXPECT_EQ(tokenize("  ,  ").tokens.size(), 0u);
}

TEST(TextUtil, Utf8RoundTrip) {
  const std::string s = "a\xC3\xA9\xE2\x80\x94\xF0\x9F\x98\x80";
  EXPECT_EQ(utf8_encode(utf8_decode(s)), s);
  EXPECT_EQ(utf8_decode("\xFF")[0], U'\uFFFD');
}

TEST(TextUtil, CsvQuotedFields) {
  std::istringstream in("# note\na,\"b,\"\"c\"\"\",\"line\nbreak\"\n");
  CsvReader reader(in);
  std::vector<std::string> f;
  ASSERT_TRUE(reader.next(f));
  EXPECT_EQ(f, (std::vector<std::string>{"a", "b,\"c\"", "line\nbreak"}));
  EXPECT_FALSE(reader.next(f));
  EXPECT_EQ(csv_escape("x,y"), "\"x,y\"");
  EXPECT_EQ(csv_escape("plain"), "plain");
}

TEST(Bleu, Examples) {
  const Transcript t = words({"the", "cat", "sat", "on", "the", "mat"});
  EXPECT_DOUBLE_EQ(bleu(t, t), 1.0);
  EXPECT_EQ(bleu(words({"x", "y"}), t), 0.0);
  EXPECT_NEAR(bleu(words({"the", "cat", "sat"}), words({"the", "cat", "sat", "down"})),
              std::exp(1.0 - 4.0 / 3.0), 1e-12);
  EXPECT_NEAR(std::exp(1.0 - 4.0 / 3.0), 0.7165, 1e-4);
}

TEST(Bleu, ZeroHigherOrderPrecisionIsZero) {
  EXPECT_EQ(bleu(words({"cat", "the"}), words({"the", "cat"})), 0.0);
}

TEST(Bleu, ClippedUnigramCount) {
  // Candidate "the the the the" vs "the cat": clipped unigram precision 1/4;
  // bigram "the the" never matches, so the score is 0.
  EXPECT_EQ(bleu(words({"the", "the", "the", "the"}), words({"the", "cat"}), 1), 0.25);
}

TEST(Bleu, EmptyInputThrows) {
  EXPECT_THROW(bleu(words({}), words({"a"})), Error);
  EXPECT_THROW(bleu(words({"a"}), words({})), Error);
}

TEST(Jaccard, Examples) {
  EXPECT_EQ(jaccard(words({"a", "b"}), words({"b", "a"})), 1.0);
  EXPECT_EQ(jaccard(words({"a"}), words({"b"})), 0.0);
  EXPECT_EQ(jaccard(words({"a", "b", "c"}), words({"b", "c", "d"})), 0.5);
  EXPECT_EQ(jaccard(words({}), words({"b"})), 0.0);
  EXPECT_THROW(jaccard(words({}), words({})), Error);
}

TEST(Cosine, Examples) {
  EXPECT_NEAR(cosine(words({"a", "b", "a"}), words({"a", "b", "a"})), 1.0, 1e-15);
  EXPECT_EQ(cosine(words({"a"}), words({"b"})), 0.0);
  EXPECT_NEAR(cosine(words({"a", "a", "b"}), words({"a", "b", "b"})), 0.8, 1e-15);
  EXPECT_THROW(cosine(words({}), words({"b"})), Error);
}

TEST(Levenshtein, Examples) {
  const auto same = levenshtein(words({"a", "b"}), words({"a", "b"}));
  EXPECT_EQ(same.distance, 0u);
  EXPECT_EQ(same.normalized, 0.0);
  const auto empty = levenshtein(words({}), words({"a", "b", "c"}));
  EXPECT_EQ(empty.distance, 3u);
  EXPECT_EQ(empty.normalized, 1.0);
  const auto ex = levenshtein(words({"a", "b", "c"}), words({"a", "x", "c", "y"}));
  EXPECT_EQ(ex.distance, 2u);
  EXPECT_EQ(ex.normalized, 0.5);
  EXPECT_EQ(levenshtein(words({}), words({})).normalized, 0.0);
}

TEST(Levenshtein, CharacterMode) {
  EXPECT_EQ(levenshtein_chars("kitten", "sitting").distance, 3u);
  EXPECT_EQ(levenshtein_chars("\xC3\xA9t\xC3\xA9", "ete").distance, 2u);
}

TEST(Levenshtein, MatchesOracleAndTriangleInequality) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 500; ++i) {
    const Transcript a = random_words(rng, 0, 8), b = random_words(rng, 0, 8), c = random_words(rng, 0, 8);
    const std::size_t ab = levenshtein(a, b).distance;
    EXPECT_EQ(ab, dp_oracle(a.tokens, b.tokens));
    EXPECT_EQ(ab, levenshtein(b, a).distance);
    EXPECT_LE(levenshtein(a, c).distance, ab + levenshtein(b, c).distance);
  }
}

TEST(Rouge, Examples) {
  const Transcript t = words({"a", "b", "c"});
  const RougeScore same = rouge_n(t, t, 2);
  EXPECT_EQ(same.recall, 1.0);
  EXPECT_EQ(same.precision, 1.0);
  EXPECT_EQ(same.f1, 1.0);

  // Reference bigrams ab, bc, cd; candidate bigrams ab, bc.
  const RougeScore part = rouge_n(words({"a", "b", "c"}), words({"a", "b", "c", "d"}), 2);
  EXPECT_NEAR(part.recall, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(part.precision, 1.0);
  EXPECT_NEAR(part.f1, 0.8, 1e-15);

  const RougeScore none = rouge_n(words({"x", "y"}), t, 1);
  EXPECT_EQ(none.f1, 0.0);
  EXPECT_THROW(rouge_n(t, words({"a"}), 2), Error);
}

TEST(RougeL, Examples) {
  const Transcript t = words({"a", "b", "c"});
  EXPECT_EQ(rouge_l(t, t).f1, 1.0);
  const RougeScore s = rouge_l(words({"a", "c", "d"}), words({"a", "b", "c", "d"}));
  EXPECT_EQ(s.recall, 0.75);
  EXPECT_EQ(s.precision, 1.0);
  EXPECT_NEAR(s.f1, 6.0 / 7.0, 1e-15);
  EXPECT_EQ(rouge_l(words({"x"}), t).f1, 0.0);
  EXPECT_THROW(rouge_l(words({}), t), Error);
}

TEST(JaroWinkler, Examples) {
  EXPECT_EQ(jaro_winkler("abc", "abc"), 1.0);
  EXPECT_EQ(jaro_winkler("abc", "xyz"), 0.0);
  EXPECT_NEAR(jaro_winkler("martha", "marhta"), 0.9611, 1e-4);
  EXPECT_NEAR(jaro_winkler("dixon", "dicksonx"), 0.8133, 1e-4);
  EXPECT_EQ(jaro_winkler("", ""), 1.0);
  EXPECT_EQ(jaro_winkler("", "a"), 0.0);
}

TEST(ScorePair, IdenticalAndDisjoint) {
  const Transcript t = tokenize("we are going home now");
  const SimilarityRecord same = score_pair(t, t, "p");
  EXPECT_EQ(same.pair_id, "p");
  EXPECT_DOUBLE_EQ(same.bleu, 1.0);
  EXPECT_EQ(same.jaccard, 1.0);
  EXPECT_NEAR(same.cosine, 1.0, 1e-15);
  EXPECT_EQ(same.levenshtein, 0u);
  EXPECT_EQ(same.rouge1.f1, 1.0);
  ASSERT_TRUE(same.rouge2);
  EXPECT_EQ(same.rouge2->f1, 1.0);
  EXPECT_EQ(same.rouge_l.f1, 1.0);
  EXPECT_EQ(same.jaro_winkler, 1.0);

  const SimilarityRecord none = score_pair(tokenize("a bcdefgh"), tokenize("uvwxyz q"));
  EXPECT_EQ(none.bleu, 0.0);
  EXPECT_EQ(none.jaccard, 0.0);
  EXPECT_EQ(none.cosine, 0.0);
  EXPECT_EQ(none.levenshtein_norm, 1.0);
  EXPECT_EQ(none.rouge1.f1, 0.0);
  EXPECT_EQ(none.rouge2->f1, 0.0);
  EXPECT_EQ(none.rouge_l.f1, 0.0);
  EXPECT_EQ(none.jaro_winkler, 0.0);
}

TEST(ScorePair, EqualsIndividualMetrics) {
  const Transcript real = tokenize("I will see you tomorrow at the station");
  const Transcript fake = tokenize("I see you at the station tomorrow");
  const SimilarityRecord r = score_pair(real, fake);
  EXPECT_EQ(r.bleu, bleu(fake, real));
  EXPECT_EQ(r.jaccard, jaccard(fake, real));
  EXPECT_EQ(r.cosine, cosine(fake, real));
  EXPECT_EQ(r.levenshtein, levenshtein(fake, real).distance);
  EXPECT_EQ(r.rouge1.f1, rouge_n(fake, real, 1).f1);
  EXPECT_EQ(r.rouge2->recall, rouge_n(fake, real, 2).recall);
  EXPECT_EQ(r.rouge_l.precision, rouge_l(fake, real).precision);
  EXPECT_EQ(r.jaro_winkler, jaro_winkler(fake.normalized(), real.normalized()));
}

TEST(ScorePair, ShortReferenceOmitsRouge2) {
  EXPECT_FALSE(score_pair(tokenize("yes"), tokenize("yes")).rouge2);
}

TEST(Metrics, SymmetryAndRanges) {
  std::mt19937_64 rng(123);
  bool bleu_asym = false, rouge_asym = false;
  for (int i = 0; i < 10000; ++i) {
    const Transcript a = random_words(rng, 2, 10), b = random_words(rng, 2, 10);
    const SimilarityRecord r = score_pair(a, b);
    for (double v : {r.bleu, r.jaccard, r.cosine, r.levenshtein_norm, r.rouge1.f1, r.rouge2->f1,
                     r.rouge_l.f1, r.jaro_winkler}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0 + 1e-12);
    }
    EXPECT_EQ(jaccard(a, b), jaccard(b, a));
    EXPECT_NEAR(cosine(a, b), cosine(b, a), 1e-15);
    EXPECT_EQ(jaro_winkler(a.normalized(), b.normalized()), jaro_winkler(b.normalized(), a.normalized()));
    if (i < 1000) {
      bleu_asym |= bleu(a, b) != bleu(b, a);
      rouge_asym |= rouge_n(a, b, 1).recall != rouge_n(b, a, 1).recall;
    }
  }
  EXPECT_TRUE(bleu_asym);
  EXPECT_TRUE(rouge_asym);
}

TEST(Rouge, BigramRecallCanExceedUnigramRecall) {
  // Clipped unigram counts can lose matches that every bigram keeps.
  const Transcript ref = tokenize("a b a"), cand = tokenize("b a b");
  EXPECT_NEAR(rouge_n(cand, ref, 1).recall, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(rouge_n(cand, ref, 2).recall, 1.0);
  std::mt19937_64 rng(123);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const Transcript a = random_words(rng, 2, 10), b = random_words(rng, 2, 10);
    const SimilarityRecord r = score_pair(a, b);
    violations += r.rouge2->recall > r.rouge1.recall + 1e-12;
  }
  RecordProperty("violations", violations);
  std::cout << "rouge2 recall above rouge1 recall in " << violations << " of 10000 pairs\n";
  EXPECT_GT(violations, 0);
}

SimilarityRecord with_bleu(double v) {
  SimilarityRecord r;
  r.bleu = r.jaccard = r.cosine = r.jaro_winkler = v;
  r.rouge1 = r.rouge_l = {v, v, v};
  r.rouge2 = RougeScore{v, v, v};
  r.levenshtein = 3;
  r.levenshtein_norm = 0.5;
  return r;
}

TEST(Aggregate, SingleRecord) {
  const std::vector<SimilarityRecord> rs{with_bleu(0.42)};
  const DistributionReport report = aggregate(rs);
  const MetricDistribution& d = report.at("bleu");
  EXPECT_EQ(d.median, 0.42);
  EXPECT_EQ(d.q3 - d.q1, 0.0);
  EXPECT_EQ(d.count, 1u);
}

TEST(Aggregate, MedianOfThree) {
  const std::vector<SimilarityRecord> rs{with_bleu(0.8), with_bleu(0.6), with_bleu(0.7)};
  const DistributionReport report = aggregate(rs);
  EXPECT_EQ(report.at("bleu").median, 0.7);
  EXPECT_THROW(aggregate(std::vector<SimilarityRecord>{}), Error);
}

TEST(Aggregate, UniformScoresHaveMedianNearHalf) {
  std::mt19937_64 rng(4);
  std::vector<SimilarityRecord> rs;
  for (int i = 0; i < 10000; ++i) rs.push_back(with_bleu(testing::uniform(rng, 0, 1)));
  const DistributionReport report = aggregate(rs, 10);
  const MetricDistribution& d = report.at("bleu");
  EXPECT_NEAR(d.median, 0.5, 0.02);
  double mass = 0;
  for (double m : d.histogram) {
    EXPECT_NEAR(m, 0.1, 0.02);
    mass += m;
  }
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(Quantile, Type7) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_EQ(quantile_sorted(v, 0.25), 1.75);
  EXPECT_EQ(quantile_sorted(v, 0.5), 2.5);
  EXPECT_EQ(quantile_sorted(v, 1.0), 4.0);
}

TEST(Summarize, TopValueLandsInLastBin) {
  const std::vector<double> v{0.0, 1.0, 1.0, 0.5};
  const MetricDistribution d = summarize("m", v, 0.0, 1.0, 4);
  EXPECT_EQ(d.histogram, (std::vector<double>{0.25, 0.0, 0.25, 0.5}));
}

TEST(Report, CsvAndJsonRoundTrip) {
  std::mt19937_64 rng(6);
  std::vector<SimilarityRecord> rs;
  for (int i = 0; i < 50; ++i) {
    const Transcript a = random_words(rng, 1, 6), b = random_words(rng, 1, 6);
    rs.push_back(score_pair(a, b, "p" + std::to_string(i)));
  }
  const DistributionReport report = aggregate(rs, 8);
  std::stringstream csv;
  write_report_csv(csv, report, "comment");
  EXPECT_EQ(read_report_csv(csv), report);
  EXPECT_EQ(report_from_json(report_to_json(report, R"({"tool":"smf"})")), report);

  std::stringstream records;
  write_records_csv(records, rs);
  const auto back = read_records_csv(records);
  ASSERT_EQ(back.size(), rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    EXPECT_EQ(back[i].pair_id, rs[i].pair_id);
    EXPECT_EQ(back[i].bleu, rs[i].bleu);
    EXPECT_EQ(back[i].rouge2.has_value(), rs[i].rouge2.has_value());
    EXPECT_EQ(back[i].jaro_winkler, rs[i].jaro_winkler);
  }
}

TEST(Report, LoadsTranscriptPairs) {
  testing::TempDir dir("pairs");
  const auto csv = dir.path() / "p.csv";
  std::ofstream(csv) << "fake_text,pair_id,real_text\n\"hi, there\",1,hello there\n";
  const auto pairs = load_transcript_pairs(csv);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].fake_text, "hi, there");
  EXPECT_EQ(pairs[0].real_text, "hello there");
  const auto jsonl = dir.path() / "p.jsonl";
  std::ofstream(jsonl) << R"({"pair_id":"x","real_text":"a","fake_text":"b"})" << "\n";
  EXPECT_EQ(load_transcript_pairs(jsonl)[0].pair_id, "x");
}

}  // namespace
}  // namespace smf
