#pragma once

#include <span>
#include <utility>

#include "smf/image.h"

namespace smf {

enum class Reduction { kMean, kSum };

struct LossParams {
  double epsilon = 1e-3;
  Reduction reduction = Reduction::kMean;
};

double l1_loss(const Image& a, const Image& b, Reduction reduction = Reduction::kMean);
double l2_loss(const Image& a, const Image& b, Reduction reduction = Reduction::kMean);

/// Charbonnier penalty rho(d) = sqrt(d^2 + eps^2) - eps. rho(0) = 0, even,
/// smooth, and rho(d) <= |d|. Throws unless epsilon is positive and finite.
double charbonnier(double d, double epsilon);

/// d rho / d d = d / sqrt(d^2 + eps^2).
double charbonnier_derivative(double d, double epsilon);

double charbonnier_loss(const Image& a, const Image& b, const LossParams& params = {});

/// Gradient of charbonnier_loss with respect to `a`.
Image charbonnier_grad(const Image& a, const Image& b, const LossParams& params = {});

/// One scale of an externally computed feature pyramid.
struct FeatureLevel {
  const Image* prediction;
  const Image* target;
  double weight;
};

/// sum_i weight_i * charbonnier_loss(prediction_i, target_i).
double weighted_charbonnier(std::span<const FeatureLevel> levels,
                            const LossParams& params = {});

}  // namespace smf
