#include "smf/svm.h"

#include <cmath>
#include <numeric>
#include <random>

#include "rng.h"
#include "smf/error.h"

namespace smf {

double SvmModel::score(const FrameFeatures& x) const {
  if (weights.size() != static_cast<std::size_t>(kFeatureDim)) {
    throw Error(ErrorCode::kInvalidArgument, "svm is untrained");
  }
  double s = bias;
  for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * (x[j] - mean[j]) * scale[j];
  return s;
}

SvmModel train_svm(const TrainingSet& data, const SvmConfig& cfg, std::uint64_t seed) {
  require_two_classes(data);
  if (!(cfg.lambda > 0.0) || cfg.epochs < 1 || !(cfg.eta0 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid svm configuration");
  }
  constexpr auto dim = static_cast<std::size_t>(kFeatureDim);
  const std::size_t n = data.size();

  SvmModel model;
  model.mean.assign(dim, 0.0);
  model.scale.assign(dim, 1.0);
  for (const auto& f : data.features) {
    for (std::size_t j = 0; j < dim; ++j) model.mean[j] += f[j];
  }
  for (double& m : model.mean) m /= static_cast<double>(n);
  for (std::size_t j = 0; j < dim; ++j) {
    double var = 0.0;
    for (const auto& f : data.features) var += (f[j] - model.mean[j]) * (f[j] - model.mean[j]);
    const double sd = std::sqrt(var / static_cast<double>(n));
    if (sd > 1e-12) model.scale[j] = 1.0 / sd;
  }

  std::vector<std::vector<double>> xs(n, std::vector<double>(dim));
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      xs[i][j] = (data.features[i][j] - model.mean[j]) * model.scale[j];
    }
    ys[i] = data.labels[i] == Label::kFake ? 1.0 : -1.0;
  }

  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  const double t0 = 1.0 / (cfg.lambda * cfg.eta0);
  double t = 0.0;
  std::mt19937_64 rng(detail::splitmix64(seed));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    detail::shuffle(order, rng);
    for (std::size_t i : order) {
      const double eta = 1.0 / (cfg.lambda * (t + t0));
      const auto& x = xs[i];
      const double margin = ys[i] * (std::inner_product(w.begin(), w.end(), x.begin(), 0.0) + b);
      const double shrink = 1.0 - eta * cfg.lambda;
      for (double& wj : w) wj *= shrink;
      if (margin < 1.0) {
        for (std::size_t j = 0; j < dim; ++j) w[j] += eta * ys[i] * x[j];
        b += eta * ys[i];
      }
      t += 1.0;
    }
  }
  for (double v : w) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kDegenerate, "svm weights diverged");
  }
  model.weights = std::move(w);
  model.bias = b;
  return model;
}

}  // namespace smf
