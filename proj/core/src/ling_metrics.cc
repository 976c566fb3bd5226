#include "smf/ling_metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "smf/error.h"
#include "smf/text_util.h"

namespace smf {
namespace {

bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\v' ||
         cp == '\f' || cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
         (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 ||
         cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

using NgramCounts = std::unordered_map<std::string, std::size_t>;

// Keys join tokens with U+001F, which tokenize() never emits inside a token.
NgramCounts count_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

std::size_t clipped_overlap(const NgramCounts& cand, const NgramCounts& ref) {
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand) {
    const auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

double f1_of(double recall, double precision) {
  return (recall + precision) > 0.0 ? 2.0 * recall * precision / (recall + precision)
                                    : 0.0;
}

template <typename Seq>
std::size_t edit_distance(const Seq& a, const Seq& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

EditDistance finish(std::size_t distance, std::size_t la, std::size_t lb) {
  const std::size_t longest = std::max(la, lb);
  return {distance, longest == 0 ? 0.0 : static_cast<double>(distance) / longest};
}

}  // namespace

std::string Transcript::normalized() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

Transcript tokenize(std::string_view raw) {
  Transcript t;
  t.raw = std::string(raw);
  std::u32string current;
  for (char32_t cp : utf8_decode(raw)) {
    if (is_space(cp)) {
      if (!current.empty()) t.tokens.push_back(utf8_encode(current));
      current.clear();
    } else if (!is_punctuation(cp) && cp != 0x1f) {
      current.push_back(to_lower(cp));
    }
  }
  if (!current.empty()) t.tokens.push_back(utf8_encode(current));
  return t;
}

double bleu(const Transcript& candidate, const Transcript& reference, int max_n) {
  if (candidate.tokens.empty() || reference.tokens.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bleu needs nonempty transcripts");
  }
  if (max_n < 1) throw Error(ErrorCode::kInvalidArgument, "bleu max_n must be >= 1");
  const std::size_t c = candidate.tokens.size();
  const std::size_t r = reference.tokens.size();
  const std::size_t orders = std::min<std::size_t>(static_cast<std::size_t>(max_n), c);

  double log_sum = 0.0;
  for (std::size_t n = 1; n <= orders; ++n) {
    const auto cand = count_ngrams(candidate.tokens, n);
    const auto ref = count_ngrams(reference.tokens, n);
    const std::size_t overlap = clipped_overlap(cand, ref);
    if (overlap == 0) return 0.0;
    log_sum += std::log(static_cast<double>(overlap) / static_cast<double>(c - n + 1));
  }
  const double bp = c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / c);
  return bp * std::exp(log_sum / static_cast<double>(orders));
}

double jaccard(const Transcript& a, const Transcript& b) {
  if (a.tokens.empty() && b.tokens.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "jaccard of two empty transcripts");
  }
  const std::set<std::string> sa(a.tokens.begin(), a.tokens.end());
  const std::set<std::string> sb(b.tokens.begin(), b.tokens.end());
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double cosine(const Transcript& a, const Transcript& b) {
  if (a.tokens.empty() || b.tokens.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cosine needs nonempty transcripts");
  }
  std::map<std::string, std::pair<double, double>> tf;
  for (const auto& t : a.tokens) tf[t].first += 1.0;
  for (const auto& t : b.tokens) tf[t].second += 1.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [term, counts] : tf) {
    dot += counts.first * counts.second;
    na += counts.first * counts.first;
    nb += counts.second * counts.second;
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

EditDistance levenshtein(const Transcript& a, const Transcript& b) {
  return finish(edit_distance(a.tokens, b.tokens), a.tokens.size(), b.tokens.size());
}

EditDistance levenshtein_chars(std::string_view a, std::string_view b) {
  const std::u32string ua = utf8_decode(a);
  const std::u32string ub = utf8_decode(b);
  return finish(edit_distance(ua, ub), ua.size(), ub.size());
}

RougeScore rouge_n(const Transcript& candidate, const Transcript& reference, int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "rouge order must be >= 1");
  const auto order = static_cast<std::size_t>(n);
  if (reference.tokens.size() < order) {
    throw Error(ErrorCode::kInvalidArgument,
                "rouge-" + std::to_string(n) + " needs a reference of at least " +
                    std::to_string(n) + " tokens");
  }
  const auto ref = count_ngrams(reference.tokens, order);
  const auto cand = count_ngrams(candidate.tokens, order);
  const std::size_t overlap = clipped_overlap(cand, ref);
  const double ref_total = static_cast<double>(reference.tokens.size() - order + 1);
  const double cand_total = candidate.tokens.size() >= order
                                ? static_cast<double>(candidate.tokens.size() - order + 1)
                                : 0.0;
  RougeScore s;
  s.recall = overlap / ref_total;
  s.precision = cand_total > 0.0 ? overlap / cand_total : 0.0;
  s.f1 = f1_of(s.recall, s.precision);
  return s;
}

RougeScore rouge_l(const Transcript& candidate, const Transcript& reference) {
  if (candidate.tokens.empty() || reference.tokens.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "rouge-l needs nonempty transcripts");
  }
  const auto& a = candidate.tokens;
  const auto& b = reference.tokens;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = static_cast<double>(prev[b.size()]);
  RougeScore s;
  s.recall = lcs / static_cast<double>(b.size());
  s.precision = lcs / static_cast<double>(a.size());
  s.f1 = f1_of(s.recall, s.precision);
  return s;
}

double jaro_winkler(std::string_view a_utf8, std::string_view b_utf8) {
  const std::u32string a = utf8_decode(a_utf8);
  const std::u32string b = utf8_decode(b_utf8);
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;

  const std::size_t longest = std::max(a.size(), b.size());
  const std::size_t window = longest / 2 >= 1 ? longest / 2 - 1 : 0;
  std::vector<bool> a_hit(a.size(), false), b_hit(b.size(), false);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(b.size(), i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (!b_hit[j] && a[i] == b[j]) {
        a_hit[i] = b_hit[j] = true;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;

  std::size_t half_transpositions = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a_hit[i]) continue;
    while (!b_hit[k]) ++k;
    if (a[i] != b[k]) ++half_transpositions;
    ++k;
  }
  const double m = static_cast<double>(matches);
  const double t = half_transpositions / 2.0;
  const double jaro = (m / a.size() + m / b.size() + (m - t) / m) / 3.0;

  std::size_t prefix = 0;
  while (prefix < 4 && prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) {
    ++prefix;
  }
  return jaro + static_cast<double>(prefix) * 0.1 * (1.0 - jaro);
}

SimilarityRecord score_pair(const Transcript& real_t, const Transcript& fake_t,
                            std::string pair_id) {
  SimilarityRecord rec;
  rec.pair_id = std::move(pair_id);
  rec.bleu = bleu(fake_t, real_t);
  rec.jaccard = jaccard(real_t, fake_t);
  rec.cosine = cosine(real_t, fake_t);
  const EditDistance ed = levenshtein(real_t, fake_t);
  rec.levenshtein = ed.distance;
  rec.levenshtein_norm = ed.normalized;
  rec.rouge1 = rouge_n(fake_t, real_t, 1);
  if (real_t.tokens.size() >= 2) rec.rouge2 = rouge_n(fake_t, real_t, 2);
  rec.rouge_l = rouge_l(fake_t, real_t);
  rec.jaro_winkler = jaro_winkler(real_t.normalized(), fake_t.normalized());
  return rec;
}

}  // namespace smf
