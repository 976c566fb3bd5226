#pragma once

#include <optional>
#include <span>
#include <vector>

#include "smf/image.h"

namespace smf {

/// Nonnegative finite map over a grid. All-zero maps are allowed here
/// (background weights may vanish); operations that need mass check for it.
class Heatmap {
 public:
  Heatmap() = default;
  Heatmap(Grid2D grid, std::vector<double> values);
  explicit Heatmap(const Image& single_channel);

  Grid2D grid() const noexcept { return grid_; }
  double at(int r, int c) const noexcept {
    return values_[static_cast<std::size_t>(r) * grid_.width + c];
  }
  std::span<const double> values() const noexcept { return values_; }
  double sum() const noexcept;

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

/// K motion-region maps plus one background map on a shared grid.
struct RegionSet {
  std::vector<Heatmap> regions;
  Heatmap background;

  std::size_t k() const noexcept { return regions.size(); }
  Grid2D grid() const;  // throws kShapeMismatch if maps disagree
};

/// Region count used by the generator this toolkit mirrors.
inline constexpr int kDefaultRegionCount = 50;

/// Eigenvalues below this floor (pixels^2) make a region rank-deficient.
inline constexpr double kCovarianceFloor = 1e-8;

/// Affine matrices with a larger condition number are treated as singular.
inline constexpr double kMaxAffineCondition = 1e8;

struct RegionParams {
  Vec2 mean;
  Mat2 covariance;
  Mat2 affine;  // affine * affine^T == covariance
};

struct RegionMotion {
  RegionParams source;
  RegionParams driving;
};

/// Backward map: for each output pixel, the source location to sample.
class FlowField {
 public:
  FlowField() = default;
  FlowField(Grid2D grid, std::vector<Vec2> map);

  static FlowField identity(Grid2D grid);

  Grid2D grid() const noexcept { return grid_; }
  Vec2 at(int r, int c) const noexcept {
    return map_[static_cast<std::size_t>(r) * grid_.width + c];
  }
  std::span<const Vec2> map() const noexcept { return map_; }
  bool operator==(const FlowField&) const = default;

 private:
  Grid2D grid_;
  std::vector<Vec2> map_;
};

class ConfidenceMap {
 public:
  ConfidenceMap() = default;
  ConfidenceMap(Grid2D grid, std::vector<double> values);  // values in [0,1]

  Grid2D grid() const noexcept { return grid_; }
  double at(int r, int c) const noexcept {
    return values_[static_cast<std::size_t>(r) * grid_.width + c];
  }
  std::span<const double> values() const noexcept { return values_; }

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

enum class WeightMode {
  kDistribution,  // divide by the sum
  kSoftmax,       // exp(temperature * v), normalized
};

/// Expected pixel location under the heatmap's weights.
/// Distribution mode treats h as an unnormalized distribution; softmax mode
/// uses softmax(temperature * h). Throws kDegenerate for an all-zero map in
/// distribution mode and kInvalidArgument for a nonpositive temperature.
Vec2 soft_argmax(const Heatmap& h, WeightMode mode = WeightMode::kDistribution,
                 double temperature = 1.0);

/// Weighted second central moment about `mean`, weights h / sum(h).
Mat2 region_covariance(const Heatmap& h, Vec2 mean);

/// A = U diag(sqrt(l1), sqrt(l2)) from cov = U diag(l) U^T with l1 >= l2.
/// Eigenvector signs: the largest-magnitude component is positive, ties go to
/// a positive row component. Throws kRankDeficient when l2 < kCovarianceFloor
/// and kInvalidArgument when cov is not symmetric.
Mat2 affine_from_covariance(const Mat2& cov);

/// Mean, covariance and affine of one region heatmap.
RegionParams region_params(const Heatmap& h,
                           WeightMode mode = WeightMode::kDistribution,
                           double temperature = 1.0);

/// Params from an explicit mean and affine (covariance = A A^T).
RegionParams region_params_from_affine(Vec2 mean, const Mat2& affine);

/// mu_s + A_s A_d^{-1} (z - mu_d): the source location sampled for driving
/// pixel z. Throws kSingular if the driving affine is ill-conditioned.
Vec2 region_backward_map(const RegionMotion& m, Vec2 z);

struct ComposeOptions {
  WeightMode mode = WeightMode::kDistribution;
  double temperature = 1.0;
  /// Background motion; identity when absent.
  std::optional<RegionMotion> background;
};

/// Per-pixel normalized weights, layout [pixel][k] with the background in
/// slot K. Each row sums to 1.
std::vector<std::vector<double>> normalized_weights(
    const RegionSet& weights, const ComposeOptions& opts = {});

/// Dense backward flow: sum_k W_k(z) map_k(z) + W_bg(z) z.
FlowField compose_flow(std::span<const RegionMotion> motions,
                       const RegionSet& weights,
                       const ComposeOptions& opts = {});

/// Bilinear backward warp with clamp-to-edge sampling.
Image warp_bilinear(const Image& src, const FlowField& flow);

/// Bilinear sample at a real-valued location with clamp-to-edge.
double sample_bilinear(const Image& src, Vec2 p, int channel = 0);

/// Elementwise product, broadcast over channels.
Image apply_confidence(const Image& warped, const ConfidenceMap& conf);

}  // namespace smf
