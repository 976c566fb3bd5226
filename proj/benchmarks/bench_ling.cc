#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "smf/ling_metrics.h"

namespace {

smf::Transcript sentence(std::mt19937_64& rng, int words) {
  static const char* kVocab[] = {"the", "a", "we", "see", "you", "later", "good", "morning",
                                 "cat", "sat", "on", "mat", "today", "is", "fine", "thanks"};
  std::string s;
  for (int i = 0; i < words; ++i) {
    if (i) s += ' ';
    s += kVocab[rng() % 16];
  }
  return smf::tokenize(s);
}

void BM_Levenshtein(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int n = static_cast<int>(state.range(0));
  const smf::Transcript a = sentence(rng, n), b = sentence(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(smf::levenshtein(a, b));
}
BENCHMARK(BM_Levenshtein)->Arg(16)->Arg(256);

void BM_ScorePair(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const smf::Transcript a = sentence(rng, 40), b = sentence(rng, 40);
  for (auto _ : state) benchmark::DoNotOptimize(smf::score_pair(a, b));
}
BENCHMARK(BM_ScorePair);

}  // namespace
