#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "smf/eval_stats.h"
#include "smf/features.h"
#include "smf/model_io.h"
#include "smf/splits.h"

namespace smf {

struct ExperimentConfig {
  ModelKind model = ModelKind::kForest;
  ForestConfig forest;
  SvmConfig svm;
  SplitSizes sizes;
  std::size_t frames_per_video = 100;
  FramePreprocess preprocess;
  std::optional<double> threshold;  // model default when empty
  /// Permute labels within train and within test (chance-level control).
  bool shuffle_labels = false;
  std::vector<int> folds = {0, 1, 2};
};

/// Sampled frame descriptors per video id.
using FeatureTable = std::unordered_map<std::string, std::vector<FrameFeatures>>;

/// Computes descriptors for `video_ids` in parallel. Ids already present are
/// kept.
void extend_feature_table(FeatureTable& table, const Manifest& manifest,
                          const std::vector<std::string>& video_ids,
                          std::size_t frames_per_video, const FramePreprocess& pre);

/// Ground truth, or the shuffled labels when cfg.shuffle_labels is set.
std::unordered_map<std::string, Label> split_labels(const Manifest& manifest, const Split& split,
                                                    bool shuffle, std::uint64_t seed);

/// Trains on split.train only; validation and test are never seen.
DetectorModel train_detector(const Split& split, const FeatureTable& features,
                             const std::unordered_map<std::string, Label>& labels,
                             const ExperimentConfig& cfg, std::uint64_t seed);

/// Per-video majority vote over `video_ids`.
ConfusionMatrix evaluate_videos(const DetectorModel& model, const std::vector<std::string>& video_ids,
                                const FeatureTable& features,
                                const std::unordered_map<std::string, Label>& labels);

struct FoldResult {
  int fold = 0;
  ConfusionMatrix confusion;
  MetricTriple metrics;
  double validation_accuracy = 0.0;  // NaN when the validation set is empty
  std::size_t train_videos = 0;
  std::size_t test_videos = 0;
};

/// Per-fold confusion matrices and metrics plus their cross-fold means.
/// model_name is free text so externally computed baselines can be merged.
struct FoldReport {
  std::string model_name;
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<FoldResult> folds;
  MetricTriple average;
};

FoldReport run_experiment(const Manifest& manifest, ScenarioKind scenario,
                          const ExperimentConfig& cfg, std::uint64_t seed);

/// Seed used to train fold `fold` of a run seeded with `seed`.
std::uint64_t fold_seed(std::uint64_t seed, int fold);

std::string fold_report_to_json(const FoldReport& report, std::string_view provenance = {});
FoldReport fold_report_from_json(std::string_view json);

/// model,scenario,seed,fold,tp,fn,tn,fp,sensitivity,specificity,accuracy,
/// validation_accuracy; the last row has fold "mean".
void write_fold_report_csv(std::ostream& out, const FoldReport& report,
                           std::string_view comment = {});
FoldReport read_fold_report_csv(std::istream& in);

}  // namespace smf
