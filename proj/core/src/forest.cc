#include "smf/forest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "rng.h"
#include "smf/error.h"

namespace smf {
namespace {

using Levels = std::vector<std::array<std::uint8_t, kFeatureDim>>;

Levels quantize(const TrainingSet& data) {
  Levels levels(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(kFeatureDim); ++j) {
      const double scaled = std::floor(data.features[i][j] * kSplitLevels);
      levels[i][j] = static_cast<std::uint8_t>(std::clamp(scaled, 0.0, kSplitLevels - 1.0));
    }
  }
  return levels;
}

// n * Gini impurity for a node with `real` real samples out of n.
double weighted_gini(double n, double real) {
  return n > 0.0 ? 2.0 * real * (n - real) / n : 0.0;
}

struct Pending {
  std::int32_t node;
  std::vector<std::uint32_t> samples;
  int depth;
};

DecisionTree grow_tree(const Levels& levels, const std::vector<Label>& labels,
                       const ForestConfig& cfg, int mtry, std::mt19937_64& rng) {
  const std::size_t n = levels.size();
  std::vector<std::uint32_t> boot(n);
  for (auto& s : boot) s = static_cast<std::uint32_t>(detail::uniform_index(rng, n));

  DecisionTree tree;
  tree.nodes.emplace_back();
  std::vector<Pending> stack;
  stack.push_back({0, std::move(boot), 0});
  std::vector<std::size_t> feature_pool(static_cast<std::size_t>(kFeatureDim));

  while (!stack.empty()) {
    Pending job = std::move(stack.back());
    stack.pop_back();
    const auto& samples = job.samples;
    std::size_t real = 0;
    for (auto s : samples) real += labels[s] == Label::kReal;
    const double count = static_cast<double>(samples.size());
    tree.nodes[static_cast<std::size_t>(job.node)].real_fraction = real / count;

    if (job.depth >= cfg.max_depth || samples.size() < static_cast<std::size_t>(cfg.min_samples_split) ||
        real == 0 || real == samples.size()) {
      continue;
    }

    std::iota(feature_pool.begin(), feature_pool.end(), std::size_t{0});
    for (int k = 0; k < mtry; ++k) {
      const std::size_t pick = k + detail::uniform_index(rng, feature_pool.size() - k);
      std::swap(feature_pool[static_cast<std::size_t>(k)], feature_pool[pick]);
    }

    const double parent = weighted_gini(count, static_cast<double>(real));
    double best = parent - 1e-12;
    int best_feature = -1;
    int best_level = 0;
    std::array<std::array<std::uint32_t, 2>, kSplitLevels> hist;
    for (int k = 0; k < mtry; ++k) {
      const std::size_t feature = feature_pool[static_cast<std::size_t>(k)];
      for (auto& h : hist) h = {0, 0};
      for (auto s : samples) ++hist[levels[s][feature]][labels[s] == Label::kReal ? 1 : 0];
      double left_n = 0.0, left_real = 0.0;
      for (int level = 1; level < kSplitLevels; ++level) {
        left_n += hist[static_cast<std::size_t>(level - 1)][0] +
                  hist[static_cast<std::size_t>(level - 1)][1];
        left_real += hist[static_cast<std::size_t>(level - 1)][1];
        if (left_n == 0.0) continue;
        if (left_n == count) break;
        const double impurity = weighted_gini(left_n, left_real) +
                                weighted_gini(count - left_n, real - left_real);
        if (impurity < best) {
          best = impurity;
          best_feature = static_cast<int>(feature);
          best_level = level;
        }
      }
    }
    if (best_feature < 0) continue;

    std::vector<std::uint32_t> left, right;
    for (auto s : samples) {
      (levels[s][static_cast<std::size_t>(best_feature)] < best_level ? left : right).push_back(s);
    }
    const auto left_id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    const auto right_id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    TreeNode& node = tree.nodes[static_cast<std::size_t>(job.node)];
    node.feature = best_feature;
    node.threshold = static_cast<double>(best_level) / kSplitLevels;
    node.left = left_id;
    node.right = right_id;
    stack.push_back({right_id, std::move(right), job.depth + 1});
    stack.push_back({left_id, std::move(left), job.depth + 1});
  }
  return tree;
}

}  // namespace

void require_two_classes(const TrainingSet& data) {
  if (data.features.size() != data.labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "feature and label counts differ");
  }
  if (data.features.empty()) throw Error(ErrorCode::kInvalidArgument, "empty training set");
  const auto real = std::count(data.labels.begin(), data.labels.end(), Label::kReal);
  if (real == 0 || static_cast<std::size_t>(real) == data.labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "training data must contain both classes");
  }
}

double DecisionTree::real_fraction(const FrameFeatures& x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left
                                                                                       : n.right);
  }
  return nodes[i].real_fraction;
}

int DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<std::size_t, int>> stack = {{0, 0}};
  int deepest = 0;
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[i].is_leaf()) {
      stack.emplace_back(static_cast<std::size_t>(nodes[i].left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(nodes[i].right), d + 1);
    }
  }
  return deepest;
}

double ForestModel::real_probability(const FrameFeatures& x) const {
  if (trees.empty()) throw Error(ErrorCode::kInvalidArgument, "forest is untrained");
  double sum = 0.0;
  for (const auto& t : trees) sum += t.real_fraction(x);
  return sum / static_cast<double>(trees.size());
}

ForestModel train_forest(const TrainingSet& data, const ForestConfig& cfg, std::uint64_t seed) {
  require_two_classes(data);
  if (cfg.trees < 1 || cfg.max_depth < 0 || cfg.min_samples_split < 2) {
    throw Error(ErrorCode::kInvalidArgument, "invalid forest configuration");
  }
  int mtry = cfg.features_per_split > 0
                 ? cfg.features_per_split
                 : static_cast<int>(std::floor(std::sqrt(static_cast<double>(kFeatureDim))));
  mtry = std::min(mtry, kFeatureDim);

  const Levels levels = quantize(data);
  ForestModel model;
  model.trees.reserve(static_cast<std::size_t>(cfg.trees));
  for (int t = 0; t < cfg.trees; ++t) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(static_cast<std::uint64_t>(t))));
    model.trees.push_back(grow_tree(levels, data.labels, cfg, mtry, rng));
  }
  return model;
}

}  // namespace smf
