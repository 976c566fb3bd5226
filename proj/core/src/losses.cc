#include "smf/losses.h"

#include <cmath>
#include <string>

#include "smf/error.h"

namespace smf {
namespace {

void check_pair(const Image& a, const Image& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::kShapeMismatch, "loss inputs differ in shape");
  }
  if (a.empty()) throw Error(ErrorCode::kInvalidArgument, "loss inputs are empty");
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "charbonnier epsilon must be positive");
  }
}

void check_params(const LossParams& params) { check_epsilon(params.epsilon); }

// sqrt(d^2 + e^2) - e rewritten as d^2 / (sqrt(d^2 + e^2) + e) to keep
// precision when |d| << e.
double charbonnier_unchecked(double d, double epsilon) {
  return d * d / (std::hypot(d, epsilon) + epsilon);
}

template <typename Penalty>
double reduce(const Image& a, const Image& b, Reduction reduction, Penalty rho) {
  check_pair(a, b);
  const auto x = a.data();
  const auto y = b.data();
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += rho(x[i] - y[i]);
  return reduction == Reduction::kMean ? total / static_cast<double>(x.size()) : total;
}

}  // namespace

double l1_loss(const Image& a, const Image& b, Reduction reduction) {
  return reduce(a, b, reduction, [](double d) { return std::abs(d); });
}

double l2_loss(const Image& a, const Image& b, Reduction reduction) {
  return reduce(a, b, reduction, [](double d) { return d * d; });
}

double charbonnier(double d, double epsilon) {
  check_epsilon(epsilon);
  return charbonnier_unchecked(d, epsilon);
}

double charbonnier_derivative(double d, double epsilon) {
  check_epsilon(epsilon);
  return d / std::hypot(d, epsilon);
}

double charbonnier_loss(const Image& a, const Image& b, const LossParams& params) {
  check_params(params);
  const double eps = params.epsilon;
  return reduce(a, b, params.reduction, [eps](double d) { return charbonnier_unchecked(d, eps); });
}

Image charbonnier_grad(const Image& a, const Image& b, const LossParams& params) {
  check_params(params);
  check_pair(a, b);
  Image grad(a.height(), a.width(), a.channels());
  const auto x = a.data();
  const auto y = b.data();
  auto g = grad.data();
  const double scale =
      params.reduction == Reduction::kMean ? 1.0 / static_cast<double>(x.size()) : 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = scale * (x[i] - y[i]) / std::hypot(x[i] - y[i], params.epsilon);
  }
  return grad;
}

double weighted_charbonnier(std::span<const FeatureLevel> levels,
                            const LossParams& params) {
  double total = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& level = levels[i];
    if (!level.prediction || !level.target) {
      throw Error(ErrorCode::kInvalidArgument,
                  "feature level " + std::to_string(i) + " is missing an image");
    }
    if (!std::isfinite(level.weight) || level.weight < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "feature level " + std::to_string(i) + " has an invalid weight");
    }
    total += level.weight * charbonnier_loss(*level.prediction, *level.target, params);
  }
  return total;
}

}  // namespace smf
