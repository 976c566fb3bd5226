#pragma once

#include <cstdint>
#include <vector>

#include "smf/forest.h"

namespace smf {

struct SvmConfig {
  double lambda = 1e-4;  // L2 regularization strength
  int epochs = 50;
  double eta0 = 0.1;     // step size at t = 0
};

/// Linear SVM over standardized features. Positive scores mean fake.
struct SvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> mean;   // per-feature training mean
  std::vector<double> scale;  // per-feature 1/std (1 for constant features)

  /// w . ((x - mean) * scale) + b. Throws if untrained.
  double score(const FrameFeatures& x) const;
  bool operator==(const SvmModel&) const = default;
};

/// Primal stochastic subgradient descent on the regularized hinge loss with
/// step 1/(lambda (t + t0)); the bias is not regularized. One seeded shuffle
/// per epoch.
SvmModel train_svm(const TrainingSet& data, const SvmConfig& cfg, std::uint64_t seed);

}  // namespace smf
