#include "smf/experiment.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <random>

#include "json.hpp"
#include "rng.h"
#include "smf/error.h"
#include "smf/parallel.h"
#include "smf/text_util.h"

namespace smf {
namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::vector<FrameFeatures>& frames_of(const FeatureTable& table, const std::string& id) {
  auto it = table.find(id);
  if (it == table.end()) throw Error(ErrorCode::kInvalidArgument, "no features for video " + id);
  return it->second;
}

Label label_of(const std::unordered_map<std::string, Label>& labels, const std::string& id) {
  auto it = labels.find(id);
  if (it == labels.end()) throw Error(ErrorCode::kInvalidArgument, "no label for video " + id);
  return it->second;
}

MetricTriple mean_metrics(const std::vector<FoldResult>& folds) {
  MetricTriple avg;
  if (folds.empty()) return avg;
  for (const auto& f : folds) {
    avg.sensitivity += f.metrics.sensitivity;
    avg.specificity += f.metrics.specificity;
    avg.accuracy += f.metrics.accuracy;
  }
  const auto n = static_cast<double>(folds.size());
  avg.sensitivity /= n;
  avg.specificity /= n;
  avg.accuracy /= n;
  return avg;
}

double json_number(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

double parse_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
}

}  // namespace

void extend_feature_table(FeatureTable& table, const Manifest& manifest,
                          const std::vector<std::string>& video_ids,
                          std::size_t frames_per_video, const FramePreprocess& pre) {
  std::vector<const VideoRecord*> todo;
  for (const auto& id : video_ids) {
    if (table.count(id)) continue;
    const VideoRecord* rec = manifest.find(id);
    if (!rec) throw Error(ErrorCode::kDanglingReference, "unknown video id " + id);
    todo.push_back(rec);
  }
  std::vector<std::vector<FrameFeatures>> computed(todo.size());
  parallel_for(0, todo.size(), [&](std::size_t i) {
    computed[i] = video_features(manifest.frames_dir(*todo[i]), frames_per_video, pre);
  });
  for (std::size_t i = 0; i < todo.size(); ++i) {
    table.emplace(todo[i]->video_id, std::move(computed[i]));
  }
}

std::unordered_map<std::string, Label> split_labels(const Manifest& manifest, const Split& split,
                                                    bool shuffle, std::uint64_t seed) {
  std::unordered_map<std::string, Label> labels;
  std::mt19937_64 rng(detail::splitmix64(seed ^ 0x5eedu));
  for (const auto* ids : {&split.train, &split.validation, &split.test}) {
    std::vector<Label> truth;
    for (const auto& id : *ids) {
      const VideoRecord* rec = manifest.find(id);
      if (!rec) throw Error(ErrorCode::kDanglingReference, "unknown video id " + id);
      truth.push_back(rec->label);
    }
    if (shuffle) detail::shuffle(truth, rng);
    for (std::size_t i = 0; i < ids->size(); ++i) labels[(*ids)[i]] = truth[i];
  }
  return labels;
}

DetectorModel train_detector(const Split& split, const FeatureTable& features,
                             const std::unordered_map<std::string, Label>& labels,
                             const ExperimentConfig& cfg, std::uint64_t seed) {
  TrainingSet data;
  for (const auto& id : split.train) {
    const Label y = label_of(labels, id);
    for (const auto& f : frames_of(features, id)) data.add(f, y);
  }
  DetectorModel model;
  model.threshold = cfg.threshold.value_or(default_threshold(cfg.model));
  if (cfg.model == ModelKind::kForest) {
    model.model = train_forest(data, cfg.forest, seed);
  } else {
    model.model = train_svm(data, cfg.svm, seed);
  }
  json meta = {{"model", to_string(cfg.model)},
               {"seed", seed},
               {"train_videos", split.train.size()},
               {"train_frames", data.size()}};
  if (cfg.model == ModelKind::kForest) {
    meta["trees"] = cfg.forest.trees;
    meta["max_depth"] = cfg.forest.max_depth;
  } else {
    meta["lambda"] = cfg.svm.lambda;
    meta["epochs"] = cfg.svm.epochs;
  }
  model.metadata = meta.dump();
  return model;
}

ConfusionMatrix evaluate_videos(const DetectorModel& model, const std::vector<std::string>& video_ids,
                                const FeatureTable& features,
                                const std::unordered_map<std::string, Label>& labels) {
  ConfusionMatrix cm;
  for (const auto& id : video_ids) {
    cm.add(label_of(labels, id), classify_video(model, frames_of(features, id)));
  }
  return cm;
}

std::uint64_t fold_seed(std::uint64_t seed, int fold) {
  return detail::splitmix64(seed + static_cast<std::uint64_t>(fold));
}

FoldReport run_experiment(const Manifest& manifest, ScenarioKind scenario,
                          const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.folds.empty()) throw Error(ErrorCode::kInvalidArgument, "no folds requested");
  std::vector<Split> splits;
  std::vector<std::string> all_ids;
  for (int fold : cfg.folds) {
    splits.push_back(make_splits(manifest, {scenario, fold}, cfg.sizes, seed));
    const Split& s = splits.back();
    for (const auto* ids : {&s.train, &s.validation, &s.test}) {
      all_ids.insert(all_ids.end(), ids->begin(), ids->end());
    }
  }
  FeatureTable features;
  extend_feature_table(features, manifest, all_ids, cfg.frames_per_video, cfg.preprocess);

  FoldReport report;
  report.model_name = std::string(to_string(cfg.model));
  report.scenario = std::string(to_string(scenario));
  report.seed = seed;
  report.folds.resize(cfg.folds.size());
  parallel_for(0, cfg.folds.size(), [&](std::size_t i) {
    const int fold = cfg.folds[i];
    const Split& split = splits[i];
    const std::uint64_t s = fold_seed(seed, fold);
    const auto labels = split_labels(manifest, split, cfg.shuffle_labels, s);
    const DetectorModel model = train_detector(split, features, labels, cfg, s);
    FoldResult& r = report.folds[i];
    r.fold = fold;
    r.confusion = evaluate_videos(model, split.test, features, labels);
    r.metrics = metrics(r.confusion);
    const ConfusionMatrix val = evaluate_videos(model, split.validation, features, labels);
    r.validation_accuracy = val.total() == 0
                                ? std::numeric_limits<double>::quiet_NaN()
                                : static_cast<double>(val.tp + val.tn) / static_cast<double>(val.total());
    r.train_videos = split.train.size();
    r.test_videos = split.test.size();
  });
  report.average = mean_metrics(report.folds);
  return report;
}

std::string fold_report_to_json(const FoldReport& report, std::string_view provenance) {
  json doc;
  if (!provenance.empty()) doc["provenance"] = json::parse(provenance);
  doc["model"] = report.model_name;
  doc["scenario"] = report.scenario;
  doc["seed"] = report.seed;
  json folds = json::array();
  for (const auto& f : report.folds) {
    json val = std::isnan(f.validation_accuracy) ? json(nullptr) : json(f.validation_accuracy);
    folds.push_back({{"fold", f.fold},
                     {"confusion",
                      {{"tp", f.confusion.tp},
                       {"fn", f.confusion.fn},
                       {"tn", f.confusion.tn},
                       {"fp", f.confusion.fp}}},
                     {"sensitivity", f.metrics.sensitivity},
                     {"specificity", f.metrics.specificity},
                     {"accuracy", f.metrics.accuracy},
                     {"validation_accuracy", std::move(val)},
                     {"train_videos", f.train_videos},
                     {"test_videos", f.test_videos}});
  }
  doc["folds"] = std::move(folds);
  doc["average"] = {{"sensitivity", report.average.sensitivity},
                    {"specificity", report.average.specificity},
                    {"accuracy", report.average.accuracy}};
  return doc.dump(2);
}

FoldReport fold_report_from_json(std::string_view text) {
  FoldReport report;
  try {
    const json doc = json::parse(text);
    report.model_name = doc.at("model").get<std::string>();
    report.scenario = doc.at("scenario").get<std::string>();
    report.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& j : doc.at("folds")) {
      FoldResult f;
      f.fold = j.at("fold").get<int>();
      const auto& cm = j.at("confusion");
      f.confusion = {cm.at("tp").get<std::size_t>(), cm.at("fn").get<std::size_t>(),
                     cm.at("tn").get<std::size_t>(), cm.at("fp").get<std::size_t>()};
      f.metrics = {j.at("sensitivity").get<double>(), j.at("specificity").get<double>(),
                   j.at("accuracy").get<double>()};
      f.validation_accuracy = json_number(j.at("validation_accuracy"));
      f.train_videos = j.at("train_videos").get<std::size_t>();
      f.test_videos = j.at("test_videos").get<std::size_t>();
      report.folds.push_back(f);
    }
    const auto& avg = doc.at("average");
    report.average = {avg.at("sensitivity").get<double>(), avg.at("specificity").get<double>(),
                      avg.at("accuracy").get<double>()};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("fold report JSON: ") + e.what());
  }
  return report;
}

void write_fold_report_csv(std::ostream& out, const FoldReport& report, std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "model,scenario,seed,fold,tp,fn,tn,fp,sensitivity,specificity,accuracy,"
         "validation_accuracy,train_videos,test_videos\n";
  const std::string prefix =
      csv_escape(report.model_name) + ',' + csv_escape(report.scenario) + ',' +
      std::to_string(report.seed) + ',';
  for (const auto& f : report.folds) {
    out << prefix << f.fold << ',' << f.confusion.tp << ',' << f.confusion.fn << ','
        << f.confusion.tn << ',' << f.confusion.fp << ',' << num(f.metrics.sensitivity) << ','
        << num(f.metrics.specificity) << ',' << num(f.metrics.accuracy) << ','
        << num(f.validation_accuracy) << ',' << f.train_videos << ',' << f.test_videos << '\n';
  }
  out << prefix << "mean,,,,," << num(report.average.sensitivity) << ','
      << num(report.average.specificity) << ',' << num(report.average.accuracy) << ",,,\n";
}

FoldReport read_fold_report_csv(std::istream& in) {
  CsvReader reader(in);
  std::vector<std::string> row;
  FoldReport report;
  if (!reader.next(row) || row.size() != 14 || row[0] != "model") {
    throw Error(ErrorCode::kParse, "fold report CSV has an unexpected header");
  }
  bool have_mean = false;
  while (reader.next(row)) {
    const int line = reader.line();
    if (row.size() != 14) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": expected 14 fields");
    }
    report.model_name = row[0];
    report.scenario = row[1];
    report.seed = std::stoull(row[2]);
    if (row[3] == "mean") {
      report.average = {parse_double(row[8], line), parse_double(row[9], line),
                        parse_double(row[10], line)};
      have_mean = true;
      continue;
    }
    FoldResult f;
    f.fold = static_cast<int>(parse_double(row[3], line));
    f.confusion = {static_cast<std::size_t>(parse_double(row[4], line)),
                   static_cast<std::size_t>(parse_double(row[5], line)),
                   static_cast<std::size_t>(parse_double(row[6], line)),
                   static_cast<std::size_t>(parse_double(row[7], line))};
    f.metrics = {parse_double(row[8], line), parse_double(row[9], line),
                 parse_double(row[10], line)};
    f.validation_accuracy = parse_double(row[11], line);
    f.train_videos = static_cast<std::size_t>(parse_double(row[12], line));
    f.test_videos = static_cast<std::size_t>(parse_double(row[13], line));
    report.folds.push_back(f);
  }
  if (!have_mean) throw Error(ErrorCode::kParse, "fold report CSV lacks the mean row");
  return report;
}

}  // namespace smf
