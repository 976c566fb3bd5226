#include "smf/motion.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "smf/error.h"
#include "smf/parallel.h"

namespace smf {
namespace {

void require_same_grid(Grid2D a, Grid2D b, const char* what) {
  if (!(a == b)) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": grid mismatch (" +
                    std::to_string(a.height) + "x" + std::to_string(a.width) +
                    " vs " + std::to_string(b.height) + "x" +
                    std::to_string(b.width) + ")");
  }
}

// Precomputed form of one region's backward map: offset + linear * z.
struct AffineMap {
  Mat2 linear;
  Vec2 offset;

  Vec2 operator()(Vec2 z) const { return offset + linear * z; }
};

AffineMap backward_affine(const RegionMotion& m) {
  if (!(condition_number(m.driving.affine) <= kMaxAffineCondition)) {
    throw Error(ErrorCode::kSingular, "driving affine is singular or ill-conditioned");
  }
  const Mat2 linear = m.source.affine * inverse(m.driving.affine);
  return {linear, m.source.mean - linear * m.driving.mean};
}

Vec2 oriented(Vec2 v) {
  const double ar = std::abs(v.row);
  const double ac = std::abs(v.col);
  const double lead = (ar >= ac) ? v.row : v.col;
  if (lead < 0.0) return {-v.row, -v.col};
  return v;
}

}  // namespace

Heatmap::Heatmap(Grid2D grid, std::vector<double> values)
    : grid_(make_grid(grid.height, grid.width)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::kShapeMismatch, "heatmap value count does not match grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "heatmap contains non-finite values");
    }
    if (v < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "heatmap contains negative values");
    }
  }
}

Heatmap::Heatmap(const Image& single_channel)
    : Heatmap(single_channel.grid(),
              std::vector<double>(single_channel.data().begin(),
                                  single_channel.data().end())) {
  if (single_channel.channels() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "heatmap image must be single-channel");
  }
}

double Heatmap::sum() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

Grid2D RegionSet::grid() const {
  const Grid2D g = background.grid();
  for (const auto& h : regions) require_same_grid(g, h.grid(), "region set");
  return g;
}

FlowField::FlowField(Grid2D grid, std::vector<Vec2> map)
    : grid_(make_grid(grid.height, grid.width)), map_(std::move(map)) {
  if (map_.size() != grid_.size()) {
    throw Error(ErrorCode::kShapeMismatch, "flow entry count does not match grid");
  }
  for (const Vec2& v : map_) {
    if (!std::isfinite(v.row) || !std::isfinite(v.col)) {
      throw Error(ErrorCode::kInvalidArgument, "flow contains non-finite entries");
    }
  }
}

FlowField FlowField::identity(Grid2D grid) {
  std::vector<Vec2> map;
  map.reserve(grid.size());
  for (int r = 0; r < grid.height; ++r) {
    for (int c = 0; c < grid.width; ++c) map.push_back({double(r), double(c)});
  }
  return FlowField(grid, std::move(map));
}

ConfidenceMap::ConfidenceMap(Grid2D grid, std::vector<double> values)
    : grid_(make_grid(grid.height, grid.width)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::kShapeMismatch, "confidence value count does not match grid");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "confidence values must lie in [0, 1]");
    }
  }
}

Vec2 soft_argmax(const Heatmap& h, WeightMode mode, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be positive");
  }
  const auto values = h.values();
  const Grid2D g = h.grid();
  const double total = h.sum();
  if (values.empty() || !(total > 0.0)) {
    throw Error(ErrorCode::kDegenerate, "degenerate heatmap");
  }

  double peak = 0.0;
  if (mode == WeightMode::kSoftmax) {
    peak = *std::max_element(values.begin(), values.end());
  }
  double wsum = 0.0, rsum = 0.0, csum = 0.0;
  std::size_t i = 0;
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c, ++i) {
      const double w = mode == WeightMode::kDistribution
                           ? values[i]
                           : std::exp(temperature * (values[i] - peak));
      wsum += w;
      rsum += w * r;
      csum += w * c;
    }
  }
  return {rsum / wsum, csum / wsum};
}

Mat2 region_covariance(const Heatmap& h, Vec2 mean) {
  const double total = h.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::kDegenerate, "degenerate heatmap");
  const auto values = h.values();
  const Grid2D g = h.grid();
  double rr = 0.0, rc = 0.0, cc = 0.0;
  std::size_t i = 0;
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c, ++i) {
      if (values[i] == 0.0) continue;
      const double dr = r - mean.row;
      const double dc = c - mean.col;
      rr += values[i] * dr * dr;
      rc += values[i] * dr * dc;
      cc += values[i] * dc * dc;
    }
  }
  rr /= total;
  rc /= total;
  cc /= total;
  return {rr, rc, rc, cc};
}

Mat2 affine_from_covariance(const Mat2& cov) {
  for (double v : {cov.a, cov.b, cov.c, cov.d}) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "covariance contains non-finite values");
    }
  }
  const double scale = std::max({1.0, std::abs(cov.a), std::abs(cov.d)});
  if (std::abs(cov.b - cov.c) > 1e-9 * scale) {
    throw Error(ErrorCode::kInvalidArgument, "covariance is not symmetric");
  }
  const double a = cov.a;
  const double d = cov.d;
  const double off = 0.5 * (cov.b + cov.c);

  const double half_trace = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), off);
  const double l1 = half_trace + radius;
  // det / l1 avoids cancellation when the eigenvalues differ greatly.
  const double l2 = l1 > 0.0 ? (a * d - off * off) / l1 : half_trace - radius;
  if (!(l2 >= kCovarianceFloor)) {
    throw Error(ErrorCode::kRankDeficient, "rank-deficient region");
  }

  Vec2 v1;
  if (off == 0.0) {
    v1 = (a >= d) ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  } else {
    const Vec2 p{l1 - d, off};
    const Vec2 q{off, l1 - a};
    const Vec2 pick = std::hypot(p.row, p.col) >= std::hypot(q.row, q.col) ? p : q;
    const double n = std::hypot(pick.row, pick.col);
    v1 = {pick.row / n, pick.col / n};
  }
  v1 = oriented(v1);
  const Vec2 v2 = oriented({-v1.col, v1.row});

  const double s1 = std::sqrt(l1);
  const double s2 = std::sqrt(l2);
  return {s1 * v1.row, s2 * v2.row, s1 * v1.col, s2 * v2.col};
}

RegionParams region_params(const Heatmap& h, WeightMode mode, double temperature) {
  RegionParams p;
  p.mean = soft_argmax(h, mode, temperature);
  p.covariance = region_covariance(h, p.mean);
  p.affine = affine_from_covariance(p.covariance);
  return p;
}

RegionParams region_params_from_affine(Vec2 mean, const Mat2& affine) {
  return {mean, affine * affine.transpose(), affine};
}

Vec2 region_backward_map(const RegionMotion& m, Vec2 z) {
  if (!(condition_number(m.driving.affine) <= kMaxAffineCondition)) {
    throw Error(ErrorCode::kSingular, "driving affine is singular or ill-conditioned");
  }
  const Mat2 linear = m.source.affine * inverse(m.driving.affine);
  return m.source.mean + linear * (z - m.driving.mean);
}

std::vector<std::vector<double>> normalized_weights(const RegionSet& weights,
                                                    const ComposeOptions& opts) {
  const Grid2D g = weights.grid();
  if (weights.k() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "region set needs at least one region");
  }
  if (opts.mode == WeightMode::kSoftmax &&
      (!(opts.temperature > 0.0) || !std::isfinite(opts.temperature))) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be positive");
  }
  const std::size_t k = weights.k();
  std::vector<std::vector<double>> out(g.size(), std::vector<double>(k + 1));
  for (std::size_t p = 0; p < g.size(); ++p) {
    auto& row = out[p];
    for (std::size_t j = 0; j < k; ++j) row[j] = weights.regions[j].values()[p];
    row[k] = weights.background.values()[p];
    if (opts.mode == WeightMode::kSoftmax) {
      const double peak = *std::max_element(row.begin(), row.end());
      for (double& v : row) v = std::exp(opts.temperature * (v - peak));
    }
    double total = 0.0;
    for (double v : row) total += v;
    if (!(total > 0.0)) {
      const int r = static_cast<int>(p / g.width);
      const int c = static_cast<int>(p % g.width);
      throw Error(ErrorCode::kDegenerate,
                  "all-zero weights at pixel (" + std::to_string(r) + ", " +
                      std::to_string(c) + ")");
    }
    for (double& v : row) v /= total;
  }
  return out;
}

FlowField compose_flow(std::span<const RegionMotion> motions,
                       const RegionSet& weights, const ComposeOptions& opts) {
  if (motions.size() != weights.k()) {
    throw Error(ErrorCode::kShapeMismatch,
                "region count mismatch: " + std::to_string(motions.size()) +
                    " motions vs " + std::to_string(weights.k()) + " weight maps");
  }
  const Grid2D g = weights.grid();
  std::vector<AffineMap> maps;
  maps.reserve(motions.size());
  for (const auto& m : motions) maps.push_back(backward_affine(m));
  std::optional<AffineMap> bg;
  if (opts.background) bg = backward_affine(*opts.background);

  const auto w = normalized_weights(weights, opts);
  const std::size_t k = motions.size();
  std::vector<Vec2> out(g.size());
  parallel_for(0, static_cast<std::size_t>(g.height), [&](std::size_t r) {
    for (int c = 0; c < g.width; ++c) {
      const std::size_t p = r * g.width + c;
      const Vec2 z{double(r), double(c)};
      Vec2 acc{0.0, 0.0};
      for (std::size_t j = 0; j < k; ++j) acc = acc + w[p][j] * maps[j](z);
      acc = acc + w[p][k] * (bg ? (*bg)(z) : z);
      out[p] = acc;
    }
  });
  return FlowField(g, std::move(out));
}

double sample_bilinear(const Image& src, Vec2 p, int channel) {
  const double rmax = src.height() - 1;
  const double cmax = src.width() - 1;
  const double pr = std::clamp(p.row, 0.0, rmax);
  const double pc = std::clamp(p.col, 0.0, cmax);
  const int r0 = static_cast<int>(std::floor(pr));
  const int c0 = static_cast<int>(std::floor(pc));
  const int r1 = std::min(r0 + 1, src.height() - 1);
  const int c1 = std::min(c0 + 1, src.width() - 1);
  const double fr = pr - r0;
  const double fc = pc - c0;
  const double v00 = src.at(r0, c0, channel);
  const double v01 = src.at(r0, c1, channel);
  const double v10 = src.at(r1, c0, channel);
  const double v11 = src.at(r1, c1, channel);
  const double top = (1.0 - fc) * v00 + fc * v01;
  const double bottom = (1.0 - fc) * v10 + fc * v11;
  const double v = (1.0 - fr) * top + fr * bottom;
  // Convex combination; the clamp only removes rounding overshoot.
  return std::clamp(v, std::min({v00, v01, v10, v11}),
                    std::max({v00, v01, v10, v11}));
}

Image warp_bilinear(const Image& src, const FlowField& flow) {
  require_same_grid(src.grid(), flow.grid(), "warp_bilinear");
  Image out(src.grid(), src.channels());
  parallel_for(0, static_cast<std::size_t>(src.height()), [&](std::size_t r) {
    for (int c = 0; c < src.width(); ++c) {
      const Vec2 p = flow.at(static_cast<int>(r), c);
      for (int ch = 0; ch < src.channels(); ++ch) {
        out.at(static_cast<int>(r), c, ch) = sample_bilinear(src, p, ch);
      }
    }
  });
  return out;
}

Image apply_confidence(const Image& warped, const ConfidenceMap& conf) {
  require_same_grid(warped.grid(), conf.grid(), "apply_confidence");
  Image out = warped;
  for (int r = 0; r < warped.height(); ++r) {
    for (int c = 0; c < warped.width(); ++c) {
      const double w = conf.at(r, c);
      for (int ch = 0; ch < warped.channels(); ++ch) out.at(r, c, ch) *= w;
    }
  }
  return out;
}

}  // namespace smf
