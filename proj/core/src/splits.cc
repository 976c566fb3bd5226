#include "smf/splits.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "rng.h"
#include "smf/error.h"

namespace smf {
namespace {

class DisjointSets {
 public:
  std::size_t id(const std::string& key) {
    auto [it, inserted] = index_.try_emplace(key, parent_.size());
    if (inserted) parent_.push_back(parent_.size());
    return it->second;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::size_t> parent_;
};

struct Unit {
  std::string name;  // smallest subject id in the unit
  std::vector<std::string> real;
  std::vector<std::string> fake;
};

std::vector<Unit> build_units(const Manifest& manifest, ScenarioKind kind) {
  DisjointSets sets;
  std::vector<std::size_t> record_set;
  for (const auto& rec : manifest.records()) {
    const std::size_t s = sets.id(rec.subject_id);
    if (kind == ScenarioKind::kIndependent) {
      if (rec.source_subject_id) sets.unite(s, sets.id(*rec.source_subject_id));
      if (rec.driving_video_id) {
        if (const VideoRecord* drv = manifest.find(*rec.driving_video_id)) {
          sets.unite(s, sets.id(drv->subject_id));
        }
      }
    }
    record_set.push_back(s);
  }
  std::map<std::size_t, Unit> by_root;
  const auto& records = manifest.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    Unit& u = by_root[sets.find(record_set[i])];
    const auto& rec = records[i];
    if (u.name.empty() || rec.subject_id < u.name) u.name = rec.subject_id;
    (rec.label == Label::kReal ? u.real : u.fake).push_back(rec.video_id);
  }
  std::vector<Unit> units;
  for (auto& [root, u] : by_root) {
    std::sort(u.real.begin(), u.real.end());
    std::sort(u.fake.begin(), u.fake.end());
    units.push_back(std::move(u));
  }
  std::sort(units.begin(), units.end(),
            [](const Unit& a, const Unit& b) { return a.name < b.name; });
  return units;
}

std::string describe(ScenarioKind kind) {
  return kind == ScenarioKind::kIndependent
             ? "subjects and driving videos disjoint from train"
             : "subjects disjoint from train";
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInfeasible, message);
}

std::vector<std::string> draw(std::vector<std::string> pool, std::size_t n,
                              std::mt19937_64& rng) {
  std::sort(pool.begin(), pool.end());
  detail::shuffle(pool, rng);
  pool.resize(n);
  return pool;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  return kind == ScenarioKind::kIndependent ? "independent" : "sub-independent";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  if (text == "independent") return ScenarioKind::kIndependent;
  if (text == "sub-independent" || text == "sub_independent") {
    return ScenarioKind::kSubIndependent;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown scenario: " + std::string(text));
}

Split make_splits(const Manifest& manifest, const SplitScenario& scenario,
                  const SplitSizes& sizes, std::uint64_t seed) {
  if (scenario.fold_index < 0 || scenario.fold_index >= kFoldCount) {
    throw Error(ErrorCode::kInvalidArgument,
                "fold index must be 0, 1 or 2, got " + std::to_string(scenario.fold_index));
  }
  if (sizes.train_real == 0 || sizes.train_fake == 0 || sizes.test_real == 0 ||
      sizes.test_fake == 0) {
    throw Error(ErrorCode::kInvalidArgument, "split sizes must be positive");
  }
  if (!(sizes.validation_fraction >= 0.0 && sizes.validation_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "validation fraction must lie in [0, 1)");
  }

  std::size_t n_real = 0, n_fake = 0;
  for (const auto& rec : manifest.records()) (rec.label == Label::kReal ? n_real : n_fake)++;
  require(n_real >= sizes.train_real + sizes.test_real,
          "need " + std::to_string(sizes.train_real + sizes.test_real) +
              " real videos, manifest has " + std::to_string(n_real));
  require(n_fake >= sizes.train_fake + sizes.test_fake,
          "need " + std::to_string(sizes.train_fake + sizes.test_fake) +
              " fake videos, manifest has " + std::to_string(n_fake));

  std::vector<Unit> units = build_units(manifest, scenario.kind);
  std::mt19937_64 unit_rng(detail::splitmix64(seed));
  detail::shuffle(units, unit_rng);
  const std::size_t start =
      static_cast<std::size_t>(scenario.fold_index) * units.size() / kFoldCount;
  std::rotate(units.begin(), units.begin() + static_cast<std::ptrdiff_t>(start), units.end());

  std::vector<std::string> test_real, test_fake, train_real, train_fake;
  for (const Unit& u : units) {
    const bool wanted = (test_real.size() < sizes.test_real && !u.real.empty()) ||
                        (test_fake.size() < sizes.test_fake && !u.fake.empty());
    auto& real = wanted ? test_real : train_real;
    auto& fake = wanted ? test_fake : train_fake;
    real.insert(real.end(), u.real.begin(), u.real.end());
    fake.insert(fake.end(), u.fake.begin(), u.fake.end());
  }
  const std::string scope = " for the " + std::string(to_string(scenario.kind)) + " scenario";
  require(test_real.size() >= sizes.test_real && test_fake.size() >= sizes.test_fake,
          "test set needs " + std::to_string(sizes.test_real) + " real and " +
              std::to_string(sizes.test_fake) + " fake videos with " + describe(scenario.kind) +
              scope);
  require(train_real.size() >= sizes.train_real,
          "train set needs " + std::to_string(sizes.train_real) + " real videos from " +
              "subjects outside the test set, only " + std::to_string(train_real.size()) +
              " remain" + scope);
  require(train_fake.size() >= sizes.train_fake,
          "train set needs " + std::to_string(sizes.train_fake) + " fake videos from " +
              "subjects outside the test set, only " + std::to_string(train_fake.size()) +
              " remain" + scope);

  std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(
                                                    static_cast<std::uint64_t>(scenario.fold_index) + 1)));
  Split split;
  for (auto [pool, n] : {std::pair{&train_real, sizes.train_real},
                         std::pair{&train_fake, sizes.train_fake}}) {
    auto picked = draw(*pool, n, rng);
    const auto k = static_cast<std::size_t>(
        std::llround(sizes.validation_fraction * static_cast<double>(n)));
    split.validation.insert(split.validation.end(), picked.begin(),
                            picked.begin() + static_cast<std::ptrdiff_t>(k));
    split.train.insert(split.train.end(), picked.begin() + static_cast<std::ptrdiff_t>(k),
                       picked.end());
  }
  for (auto [pool, n] : {std::pair{&test_real, sizes.test_real},
                         std::pair{&test_fake, sizes.test_fake}}) {
    auto picked = draw(*pool, n, rng);
    split.test.insert(split.test.end(), picked.begin(), picked.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::set<std::string> apparent_subjects(const Manifest& manifest,
                                        const std::vector<std::string>& video_ids) {
  std::set<std::string> out;
  for (const auto& id : video_ids) {
    const VideoRecord* rec = manifest.find(id);
    if (!rec) throw Error(ErrorCode::kDanglingReference, "unknown video id " + id);
    out.insert(rec->subject_id);
  }
  return out;
}

std::set<std::string> driving_video_ids(const Manifest& manifest,
                                        const std::vector<std::string>& video_ids) {
  std::set<std::string> out;
  for (const auto& id : video_ids) {
    const VideoRecord* rec = manifest.find(id);
    if (!rec) throw Error(ErrorCode::kDanglingReference, "unknown video id " + id);
    if (rec->driving_video_id) out.insert(*rec->driving_video_id);
  }
  return out;
}

}  // namespace smf
