#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "smf/manifest.h"

namespace smf {

enum class ScenarioKind { kIndependent, kSubIndependent };

std::string_view to_string(ScenarioKind kind);
/// "independent", "sub-independent" or "sub_independent".
ScenarioKind parse_scenario_kind(std::string_view text);

inline constexpr int kFoldCount = 3;

struct SplitScenario {
  ScenarioKind kind = ScenarioKind::kIndependent;
  int fold_index = 0;  // 0, 1 or 2
};

struct SplitSizes {
  std::size_t train_real = 150;
  std::size_t train_fake = 150;
  std::size_t test_real = 50;
  std::size_t test_fake = 50;
  /// Share of each training class moved to validation (rounded).
  double validation_fraction = 0.1;
};

/// Video ids, each list sorted.
struct Split {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;

  bool operator==(const Split&) const = default;
};

/// Splits are built from indivisible units that never straddle train and
/// test. Sub-independent units are apparent subjects. Independent units also
/// merge a fake's subject with its source subject and with the subject of
/// its driving video, so no identity and no driving video is shared.
///
/// Units are shuffled once by `seed`; fold f starts at unit f * U / 3 and
/// moves units to test while they help fill a short class. Exact counts are
/// then drawn from each side. Throws kInfeasible naming the unmet constraint.
Split make_splits(const Manifest& manifest, const SplitScenario& scenario,
                  const SplitSizes& sizes, std::uint64_t seed);

std::set<std::string> apparent_subjects(const Manifest& manifest,
                                        const std::vector<std::string>& video_ids);
std::set<std::string> driving_video_ids(const Manifest& manifest,
                                        const std::vector<std::string>& video_ids);

}  // namespace smf
