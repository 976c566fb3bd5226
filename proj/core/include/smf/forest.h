#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smf/features.h"
#include "smf/manifest.h"

namespace smf {

/// Frame descriptors with one label each.
struct TrainingSet {
  std::vector<FrameFeatures> features;
  std::vector<Label> labels;

  std::size_t size() const noexcept { return features.size(); }
  void add(const FrameFeatures& f, Label y) {
    features.push_back(f);
    labels.push_back(y);
  }
};

/// Throws kInvalidArgument when empty, mismatched, or single-class.
void require_two_classes(const TrainingSet& data);

struct ForestConfig {
  int trees = 100;
  int max_depth = 12;
  int min_samples_split = 2;
  /// Candidate features per split; 0 means floor(sqrt(kFeatureDim)).
  int features_per_split = 0;
};

/// Split thresholds are searched on a 256-level grid over [0, 1], which is
/// where every descriptor entry lives: a sample goes left when x < threshold.
inline constexpr int kSplitLevels = 256;

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double real_fraction = 0.0;  // share of real samples reaching this node

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double real_fraction(const FrameFeatures& x) const;
  int depth() const;
  bool operator==(const DecisionTree&) const = default;
};

struct ForestModel {
  std::vector<DecisionTree> trees;

  /// Mean leaf real-fraction over trees.
  double real_probability(const FrameFeatures& x) const;
  bool operator==(const ForestModel&) const = default;
};

/// CART trees with Gini impurity on bootstrap samples, random feature
/// subsets per split. Deterministic in (data, cfg, seed). If no feature
/// separates the classes the trees are single leaves predicting the
/// majority class.
ForestModel train_forest(const TrainingSet& data, const ForestConfig& cfg,
                         std::uint64_t seed);

}  // namespace smf
