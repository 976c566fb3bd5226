#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "smf/error.h"
#include "smf/losses.h"
#include "synthetic.h"

namespace smf {
namespace {

Image row(std::vector<double> v) {
  Image img(1, static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) img.data()[i] = v[i];
  return img;
}

TEST(L1, Examples) {
  const Image ones(3, 3, 1, 1.0), zeros(3, 3);
  EXPECT_EQ(l1_loss(ones, ones), 0.0);
  EXPECT_EQ(l1_loss(ones, zeros), 1.0);
  EXPECT_EQ(l1_loss(row({0, 0.5}), row({0.5, 0}), Reduction::kSum), 1.0);
}

TEST(L2, Examples) {
  const Image ones(3, 3, 1, 1.0), zeros(3, 3);
  EXPECT_EQ(l2_loss(ones, ones), 0.0);
  EXPECT_EQ(l2_loss(ones, zeros), 1.0);
}

TEST(L2, OutlierDominates) {
  std::vector<double> a(100, 0.0);
  a[17] = 10.0;
  const Image pa = row(a), pb = row(std::vector<double>(100, 0.0));
  EXPECT_NEAR(l2_loss(pa, pb), 1.0, 1e-15);
  EXPECT_NEAR(l1_loss(pa, pb), 0.1, 1e-15);
}

TEST(Losses, CauchySchwarz) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const Image a = testing::random_image(5, 6, rng), b = testing::random_image(5, 6, rng);
    const double n = static_cast<double>(a.size());
    EXPECT_LE(l1_loss(a, b, Reduction::kSum), std::sqrt(n * l2_loss(a, b, Reduction::kSum)) + 1e-12);
  }
}

TEST(Losses, ShapeMismatchThrows) {
  try {
    l1_loss(Image(2, 2), Image(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
  EXPECT_THROW(charbonnier_loss(Image(2, 2), Image(2, 2, 3)), Error);
}

TEST(Charbonnier, ZeroAtEquality) {
  const Image a(4, 4, 1, 0.3);
  EXPECT_EQ(charbonnier_loss(a, a), 0.0);
  EXPECT_EQ(charbonnier(0.0, 1e-3), 0.0);
}

TEST(Charbonnier, LargeDifference) {
  // sqrt(100 + 1e-6) - 1e-3: about |d| - eps, below |d|.
  const double v = charbonnier(10.0, 1e-3);
  EXPECT_NEAR(v, std::sqrt(100.0 + 1e-6) - 1e-3, 1e-12);
  EXPECT_NEAR(v, 10.0, 1.1e-3);
  EXPECT_LT(v, 10.0);
}

TEST(Charbonnier, UnitEpsilon) {
  EXPECT_NEAR(charbonnier(1.0, 1.0), std::sqrt(2.0) - 1.0, 1e-15);
}

TEST(Charbonnier, EvenMonotoneAndBoundedByAbs) {
  for (double eps : {1.0, 1e-2, 1e-4}) {
    double prev = -1.0;
    for (double d = 0.0; d <= 3.0; d += 0.125) {
      const double v = charbonnier(d, eps);
      EXPECT_EQ(v, charbonnier(-d, eps));
      EXPECT_LE(v, d);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(Charbonnier, ConvergesToAbsAsEpsilonShrinks) {
  for (double d = -2.0; d <= 2.0; d += 0.25) {
    const double g1 = std::abs(d) - charbonnier(d, 1.0);
    const double g2 = std::abs(d) - charbonnier(d, 1e-2);
    const double g3 = std::abs(d) - charbonnier(d, 1e-4);
    EXPECT_GE(g1, g2);
    EXPECT_GE(g2, g3);
    EXPECT_LE(g3, 1e-4);
  }
}

TEST(Charbonnier, DerivativeValues) {
  EXPECT_EQ(charbonnier_derivative(0.0, 1e-3), 0.0);
  EXPECT_NEAR(charbonnier_derivative(0.01, 0.01), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(charbonnier_derivative(-0.01, 0.01), -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Charbonnier, GradientZeroAtEquality) {
  const Image a(3, 3, 1, 0.7);
  const Image g = charbonnier_grad(a, a);
  for (double v : g.data()) EXPECT_EQ(v, 0.0);
}

TEST(Charbonnier, GradientAtEpsilonBeforeReduction) {
  const double eps = 0.05;
  const Image a = row({eps, 0.3}), b = row({0.0, 0.3});
  const Image g = charbonnier_grad(a, b, {eps, Reduction::kSum});
  EXPECT_NEAR(g.data()[0], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(g.data()[1], 0.0);
  const Image gm = charbonnier_grad(a, b, {eps, Reduction::kMean});
  EXPECT_NEAR(gm.data()[0], 0.5 / std::sqrt(2.0), 1e-15);
}

TEST(Charbonnier, GradientMatchesCentralDifferences) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    const double eps = seed % 2 ? 0.1 : 1e-2;
    const Reduction red = seed % 3 ? Reduction::kMean : Reduction::kSum;
    Image a = testing::random_image(4, 4, rng), b = testing::random_image(4, 4, rng);
    const LossParams p{eps, red};
    const Image g = charbonnier_grad(a, b, p);
    const double h = 1e-5;
    double max_err = 0, max_g = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double x = a.data()[i];
      a.data()[i] = x + h;
      const double up = charbonnier_loss(a, b, p);
      a.data()[i] = x - h;
      const double down = charbonnier_loss(a, b, p);
      a.data()[i] = x;
      max_err = std::max(max_err, std::abs((up - down) / (2 * h) - g.data()[i]));
      max_g = std::max(max_g, std::abs(g.data()[i]));
    }
    EXPECT_LE(max_err, 1e-6 * max_g) << "seed " << seed;
  }
}

TEST(Charbonnier, RejectsNonpositiveEpsilon) {
  EXPECT_THROW(charbonnier(1.0, 0.0), Error);
  EXPECT_THROW(charbonnier_loss(Image(1, 1), Image(1, 1), {-1.0, Reduction::kMean}), Error);
}

TEST(WeightedCharbonnier, SumsWeightedLevels) {
  std::mt19937_64 rng(1);
  const Image a0 = testing::random_image(8, 8, rng), b0 = testing::random_image(8, 8, rng);
  const Image a1 = testing::random_image(4, 4, rng), b1 = testing::random_image(4, 4, rng);
  const std::vector<FeatureLevel> levels{{&a0, &b0, 1.0}, {&a1, &b1, 0.5}};
  EXPECT_NEAR(weighted_charbonnier(levels),
              charbonnier_loss(a0, b0) + 0.5 * charbonnier_loss(a1, b1), 1e-15);
  EXPECT_EQ(weighted_charbonnier(std::span<const FeatureLevel>{}), 0.0);
}

}  // namespace
}  // namespace smf
