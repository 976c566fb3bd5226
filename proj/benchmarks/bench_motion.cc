#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "smf/motion.h"

namespace {

smf::Image noise(int side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  smf::Image img(side, side);
  for (double& v : img.data()) v = u(rng);
  return img;
}

smf::Heatmap blob(smf::Grid2D g, double r0, double c0, double sigma) {
  std::vector<double> v(static_cast<std::size_t>(g.height) * g.width);
  for (int r = 0; r < g.height; ++r)
    for (int c = 0; c < g.width; ++c)
      v[static_cast<std::size_t>(r) * g.width + c] =
          std::exp(-((r - r0) * (r - r0) + (c - c0) * (c - c0)) / (2 * sigma * sigma));
  return smf::Heatmap(g, std::move(v));
}

void BM_WarpBilinear(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const smf::Image src = noise(side, 1);
  std::vector<smf::Vec2> map;
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) map.push_back({r + 0.3 * std::sin(c * 0.1), c + 0.7});
  const smf::FlowField flow(smf::make_grid(side, side), std::move(map));
  for (auto _ : state) benchmark::DoNotOptimize(smf::warp_bilinear(src, flow));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_WarpBilinear)->Arg(64)->Arg(256);

void BM_ComposeFlow(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const smf::Grid2D g = smf::make_grid(64, 64);
  smf::RegionSet set;
  std::vector<smf::RegionMotion> motions;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(8.0, 56.0);
  for (int i = 0; i < k; ++i) {
    const double r = u(rng), c = u(rng);
    set.regions.push_back(blob(g, r, c, 4.0));
    motions.push_back({smf::region_params_from_affine({r, c}, smf::Mat2::identity()),
                       smf::region_params_from_affine({r + 1, c - 1}, smf::Mat2::diag(1.1, 0.9))});
  }
  set.background = smf::Heatmap(g, std::vector<double>(64 * 64, 0.1));
  for (auto _ : state) benchmark::DoNotOptimize(smf::compose_flow(motions, set));
}
BENCHMARK(BM_ComposeFlow)->Arg(10)->Arg(50);

}  // namespace
