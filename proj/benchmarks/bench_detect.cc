#include <random>

#include <benchmark/benchmark.h>

#include "smf/features.h"
#include "smf/forest.h"

namespace {

smf::Image frame(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  smf::Image img(96, 96);
  for (double& v : img.data()) v = u(rng);
  return img;
}

void BM_ExtractFeatures(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const smf::Image img = frame(rng);
  for (auto _ : state) benchmark::DoNotOptimize(smf::extract_features(img));
}
BENCHMARK(BM_ExtractFeatures);

void BM_TrainForest(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  smf::TrainingSet data;
  for (int i = 0; i < 400; ++i) {
    smf::FrameFeatures f;
    const bool fake = i % 2;
    for (double& v : f.values) v = 0.5 * u(rng) + (fake ? 0.3 : 0.2);
    data.add(f, fake ? smf::Label::kFake : smf::Label::kReal);
  }
  const smf::ForestConfig cfg{static_cast<int>(state.range(0)), 12, 2, 0};
  for (auto _ : state) benchmark::DoNotOptimize(smf::train_forest(data, cfg, 7));
}
BENCHMARK(BM_TrainForest)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
