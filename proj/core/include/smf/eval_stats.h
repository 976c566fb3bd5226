#pragma once

#include <cstddef>
#include <string>

#include "smf/manifest.h"

namespace smf {

/// Binary confusion counts. Fake is the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;  // fake predicted fake
  std::size_t fn = 0;  // fake predicted real
  std::size_t tn = 0;  // real predicted real
  std::size_t fp = 0;  // real predicted fake

  std::size_t total() const noexcept { return tp + fn + tn + fp; }
  void add(Label truth, Label predicted);
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  bool operator==(const ConfusionMatrix&) const = default;
};

struct MetricTriple {
  double sensitivity = 0.0;
  double specificity = 0.0;
  double accuracy = 0.0;
};

/// Throws kInvalidArgument if either class is absent.
MetricTriple metrics(const ConfusionMatrix& cm);

/// The unique matrix with tp + fn = n_fake and tn + fp = n_real whose
/// metrics all lie within `tol` of `target`. Throws kNoMatch or kAmbiguous.
ConfusionMatrix reconstruct_confusion(std::size_t n_real, std::size_t n_fake,
                                      const MetricTriple& target, double tol = 5e-5);

enum class StatsScope { kFake, kReal, kAll };

StatsScope parse_stats_scope(std::string_view text);

/// Dataset summary over the records in scope (fake videos by default).
struct StatsReport {
  std::size_t total_videos = 0;
  std::size_t female_videos = 0;
  std::size_t male_videos = 0;
  std::size_t unspecified_videos = 0;
  double mean_duration_s = 0.0;  // full precision; display rounds to 2 d.p.
  std::size_t total_subjects = 0;
  std::size_t original_subjects = 0;
  std::size_t unseen_subjects = 0;
};

/// Subjects are apparent identities (subject_id); a subject counts as unseen
/// when any of its records in scope is flagged unseen_subject.
StatsReport dataset_stats(const Manifest& manifest, StatsScope scope = StatsScope::kFake);

/// Mean duration rounded half-away-from-zero to two decimals.
double rounded_mean_duration(const StatsReport& report);

std::string stats_to_json(const StatsReport& report);
/// Two-column aligned table in the dataset-statistics row order.
std::string stats_to_table(const StatsReport& report);

}  // namespace smf
