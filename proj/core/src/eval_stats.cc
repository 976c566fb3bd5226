#include "smf/eval_stats.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "json.hpp"
#include "smf/error.h"

namespace smf {

void ConfusionMatrix::add(Label truth, Label predicted) {
  if (truth == Label::kFake) {
    ++(predicted == Label::kFake ? tp : fn);
  } else {
    ++(predicted == Label::kReal ? tn : fp);
  }
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  tp += o.tp;
  fn += o.fn;
  tn += o.tn;
  fp += o.fp;
  return *this;
}

MetricTriple metrics(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0 || cm.tn + cm.fp == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "metrics need at least one fake and one real sample");
  }
  MetricTriple m;
  m.sensitivity = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  m.specificity = static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  return m;
}

ConfusionMatrix reconstruct_confusion(std::size_t n_real, std::size_t n_fake,
                                      const MetricTriple& target, double tol) {
  if (n_real == 0 || n_fake == 0) {
    throw Error(ErrorCode::kInvalidArgument, "class sizes must be positive");
  }
  if (!(tol >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be >= 0");
  std::vector<ConfusionMatrix> hits;
  for (std::size_t tp = 0; tp <= n_fake; ++tp) {
    for (std::size_t tn = 0; tn <= n_real; ++tn) {
      const ConfusionMatrix cm{tp, n_fake - tp, tn, n_real - tn};
      const MetricTriple m = metrics(cm);
      if (std::abs(m.sensitivity - target.sensitivity) <= tol &&
          std::abs(m.specificity - target.specificity) <= tol &&
          std::abs(m.accuracy - target.accuracy) <= tol) {
        hits.push_back(cm);
      }
    }
  }
  if (hits.empty()) {
    throw Error(ErrorCode::kNoMatch, "no confusion matrix matches the target metrics");
  }
  if (hits.size() > 1) {
    throw Error(ErrorCode::kAmbiguous,
                std::to_string(hits.size()) + " confusion matrices match the target metrics");
  }
  return hits.front();
}

StatsScope parse_stats_scope(std::string_view text) {
  if (text == "fake") return StatsScope::kFake;
  if (text == "real") return StatsScope::kReal;
  if (text == "all") return StatsScope::kAll;
  throw Error(ErrorCode::kInvalidArgument, "unknown stats scope '" + std::string(text) + "'");
}

StatsReport dataset_stats(const Manifest& manifest, StatsScope scope) {
  StatsReport report;
  std::map<std::string, bool> subjects;  // subject -> unseen
  double duration = 0.0;
  for (const auto& r : manifest.records()) {
    if (scope == StatsScope::kFake && r.label != Label::kFake) continue;
    if (scope == StatsScope::kReal && r.label != Label::kReal) continue;
    ++report.total_videos;
    switch (r.gender) {
      case Gender::kFemale: ++report.female_videos; break;
      case Gender::kMale: ++report.male_videos; break;
      case Gender::kUnspecified: ++report.unspecified_videos; break;
    }
    duration += r.duration_s;
    subjects[r.subject_id] = subjects[r.subject_id] || r.unseen_subject;
  }
  if (report.total_videos == 0) {
    throw Error(ErrorCode::kInvalidArgument, "no videos in the selected scope");
  }
  report.mean_duration_s = duration / static_cast<double>(report.total_videos);
  report.total_subjects = subjects.size();
  for (const auto& [id, unseen] : subjects) {
    ++(unseen ? report.unseen_subjects : report.original_subjects);
  }
  return report;
}

double rounded_mean_duration(const StatsReport& report) {
  return std::round(report.mean_duration_s * 100.0) / 100.0;
}

std::string stats_to_json(const StatsReport& report) {
  nlohmann::json j = {{"total_videos", report.total_videos},
                      {"female_videos", report.female_videos},
                      {"male_videos", report.male_videos},
                      {"unspecified_videos", report.unspecified_videos},
                      {"mean_duration_s", rounded_mean_duration(report)},
                      {"mean_duration_s_exact", report.mean_duration_s},
                      {"total_subjects", report.total_subjects},
                      {"original_subjects", report.original_subjects},
                      {"unseen_subjects", report.unseen_subjects}};
  return j.dump(2);
}

std::string stats_to_table(const StatsReport& report) {
  char duration[32];
  std::snprintf(duration, sizeof(duration), "%.2f", rounded_mean_duration(report));
  std::vector<std::pair<std::string, std::string>> rows = {
      {"Total Videos", std::to_string(report.total_videos)},
      {"Female Videos", std::to_string(report.female_videos)},
      {"Male Videos", std::to_string(report.male_videos)},
  };
  if (report.unspecified_videos > 0) {
    rows.emplace_back("Unspecified Gender Videos", std::to_string(report.unspecified_videos));
  }
  rows.emplace_back("Average Duration (seconds)", duration);
  rows.emplace_back("Total Subjects", std::to_string(report.total_subjects));
  rows.emplace_back("Subjects in Original Dataset", std::to_string(report.original_subjects));
  rows.emplace_back("Completely Unseen Subjects", std::to_string(report.unseen_subjects));

  std::size_t width = 9;  // "Statistic"
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  std::string out = "Statistic" + std::string(width - 9 + 2, ' ') + "Value\n";
  for (const auto& [k, v] : rows) out += k + std::string(width - k.size() + 2, ' ') + v + "\n";
  return out;
}

}  // namespace smf
