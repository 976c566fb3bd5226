#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smf {

/// Normalized word sequence of one transcript.
struct Transcript {
  std::string raw;
  std::vector<std::string> tokens;

  /// Tokens joined by single spaces; the character-level view of the text.
  std::string normalized() const;
};

/// Lowercase, strip punctuation, split on whitespace.
Transcript tokenize(std::string_view raw);

/// Sentence BLEU with uniform weights over n = 1..min(max_n, |candidate|),
/// no smoothing, brevity penalty min(1, exp(1 - r/c)).
double bleu(const Transcript& candidate, const Transcript& reference, int max_n = 4);

/// |A n B| / |A u B| over token sets.
double jaccard(const Transcript& a, const Transcript& b);

/// Cosine of term-frequency vectors.
double cosine(const Transcript& a, const Transcript& b);

struct EditDistance {
  std::size_t distance = 0;
  double normalized = 0.0;  // distance / max(|a|, |b|), 0 when both empty
};

/// Token-level edit distance with unit costs.
EditDistance levenshtein(const Transcript& a, const Transcript& b);

/// Code-point-level edit distance of two UTF-8 strings.
EditDistance levenshtein_chars(std::string_view a, std::string_view b);

struct RougeScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

/// Clipped n-gram overlap. Throws if the reference has fewer than n tokens.
RougeScore rouge_n(const Transcript& candidate, const Transcript& reference, int n);

/// Longest-common-subsequence ROUGE.
RougeScore rouge_l(const Transcript& candidate, const Transcript& reference);

/// Jaro similarity with the Winkler prefix boost (p = 0.1, prefix <= 4),
/// on code points. Two empty strings score 1.0.
double jaro_winkler(std::string_view a, std::string_view b);

struct SimilarityRecord {
  std::string pair_id;
  double bleu = 0.0;
  double jaccard = 0.0;
  double cosine = 0.0;
  std::size_t levenshtein = 0;
  double levenshtein_norm = 0.0;
  RougeScore rouge1;
  std::optional<RougeScore> rouge2;  // empty when the real transcript has < 2 tokens
  RougeScore rouge_l;
  double jaro_winkler = 0.0;
};

/// All metrics with the real transcript as reference and the fake as
/// candidate. Jaro-Winkler runs on the normalized strings.
SimilarityRecord score_pair(const Transcript& real_t, const Transcript& fake_t,
                            std::string pair_id = {});

}  // namespace smf
