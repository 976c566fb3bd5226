#include <limits>
#include <memory>
#include <sstream>

#include "commands.h"
#include "smf/error.h"
#include "smf/experiment.h"

namespace smf::cli {
namespace {

struct SplitOpts {
  std::string manifest;
  std::string scenario = "independent";
  std::uint64_t seed = 0;
  SplitSizes sizes;
};

void add_split_options(CLI::App* sub, SplitOpts& o) {
  sub->add_option("--manifest", o.manifest, "JSON-lines manifest")->required()->check(CLI::ExistingFile);
  sub->add_option("--scenario", o.scenario, "independent or sub-independent")
      ->check(CLI::IsMember({"independent", "sub-independent", "sub_independent"}));
  sub->add_option("--seed", o.seed, "split and training seed");
  sub->add_option("--train-real", o.sizes.train_real, "real training videos (validation included)");
  sub->add_option("--train-fake", o.sizes.train_fake, "fake training videos (validation included)");
  sub->add_option("--test-real", o.sizes.test_real, "real test videos");
  sub->add_option("--test-fake", o.sizes.test_fake, "fake test videos");
  sub->add_option("--validation-fraction", o.sizes.validation_fraction,
                  "share of each training class held out for validation");
}

struct ModelOpts {
  std::string model = "rf";
  std::size_t frames = 100;
  bool no_sharpen = false;
  std::optional<double> threshold;
  ForestConfig forest;
  SvmConfig svm;
};

void add_model_options(CLI::App* sub, ModelOpts& o) {
  sub->add_option("--model", o.model, "rf or svm")->check(CLI::IsMember({"rf", "forest", "svm"}));
  sub->add_option("--frames", o.frames, "frames sampled per video")->check(CLI::PositiveNumber);
  sub->add_flag("--no-sharpen", o.no_sharpen, "skip sharpening before downsampling");
  sub->add_option("--threshold", o.threshold,
                  "decision threshold (rf: real probability, svm: fake score)");
  sub->add_option("--trees", o.forest.trees, "forest size")->check(CLI::PositiveNumber);
  sub->add_option("--depth", o.forest.max_depth, "maximum tree depth")->check(CLI::NonNegativeNumber);
  sub->add_option("--lambda", o.svm.lambda, "svm regularization")->check(CLI::PositiveNumber);
  sub->add_option("--epochs", o.svm.epochs, "svm epochs")->check(CLI::PositiveNumber);
}

ExperimentConfig experiment_config(const SplitOpts& s, const ModelOpts& m) {
  ExperimentConfig cfg;
  cfg.model = parse_model_kind(m.model);
  cfg.forest = m.forest;
  cfg.svm = m.svm;
  cfg.sizes = s.sizes;
  cfg.frames_per_video = m.frames;
  cfg.preprocess.sharpen = !m.no_sharpen;
  cfg.threshold = m.threshold;
  return cfg;
}

void add_split(CLI::App& app, Context& ctx) {
  struct Opts {
    SplitOpts split;
    int fold = 0;
    std::string output;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("split", "train / validation / test split of one fold");
  add_split_options(sub, o->split);
  sub->add_option("--fold", o->fold, "fold index")->check(CLI::Range(0, kFoldCount - 1));
  sub->add_option("--output", o->output, "write the split JSON here instead of stdout");
  sub->callback([sub, o, &ctx] {
    const Manifest manifest = load_manifest(o->split.manifest);
    const ScenarioKind kind = parse_scenario_kind(o->split.scenario);
    const Split split = make_splits(manifest, {kind, o->fold}, o->split.sizes, o->split.seed);
    const auto train_subjects = apparent_subjects(manifest, split.train);
    const auto test_subjects = apparent_subjects(manifest, split.test);
    std::size_t shared = 0;
    for (const auto& s : test_subjects) shared += train_subjects.count(s);
    json doc = header(*sub);
    doc["train"] = split.train;
    doc["validation"] = split.validation;
    doc["test"] = split.test;
    doc["shared_subjects"] = shared;
    if (o->output.empty()) {
      print_json(ctx.out, doc);
    } else {
      write_text(o->output, doc.dump(2) + "\n");
    }
  });
}

void add_train(CLI::App& app, Context& ctx) {
  struct Opts {
    SplitOpts split;
    ModelOpts model;
    int fold = 0;
    std::string output;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("detect-train", "train a frame classifier on one fold");
  add_split_options(sub, o->split);
  add_model_options(sub, o->model);
  sub->add_option("--fold", o->fold, "fold index")->check(CLI::Range(0, kFoldCount - 1));
  sub->add_option("--output", o->output, "SMDL1 model file")->required();
  sub->callback([sub, o, &ctx] {
    const Manifest manifest = load_manifest(o->split.manifest);
    const ExperimentConfig cfg = experiment_config(o->split, o->model);
    const ScenarioKind kind = parse_scenario_kind(o->split.scenario);
    const Split split = make_splits(manifest, {kind, o->fold}, cfg.sizes, o->split.seed);
    FeatureTable features;
    extend_feature_table(features, manifest, split.train, cfg.frames_per_video, cfg.preprocess);
    const std::uint64_t seed = fold_seed(o->split.seed, o->fold);
    const auto labels = split_labels(manifest, split, false, seed);
    DetectorModel model = train_detector(split, features, labels, cfg, seed);
    json meta = header(*sub);
    meta["params"].erase("output");  // where the file lands is not part of the model
    meta["training"] = json::parse(model.metadata);
    model.metadata = meta.dump();
    save_model(o->output, model);
    json doc = header(*sub);
    doc["train_videos"] = split.train.size();
    doc["threshold"] = model.threshold;
    print_json(ctx.out, doc);
  });
}

void add_eval(CLI::App& app, Context& ctx) {
  struct Opts {
    SplitOpts split;
    ModelOpts model;
    std::vector<int> folds = {0, 1, 2};
    bool shuffle_labels = false;
    std::string model_file, json_path, csv_path;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("detect-eval", "per-fold video-level detection metrics");
  add_split_options(sub, o->split);
  add_model_options(sub, o->model);
  sub->add_option("--folds", o->folds, "folds to run")->check(CLI::Range(0, kFoldCount - 1));
  sub->add_flag("--shuffle-labels", o->shuffle_labels, "permute labels (chance-level control)");
  sub->add_option("--model-file", o->model_file, "evaluate this saved model on the first fold")
      ->check(CLI::ExistingFile);
  sub->add_option("--json", o->json_path, "fold report JSON output");
  sub->add_option("--csv", o->csv_path, "fold report CSV output");
  sub->callback([sub, o, &ctx] {
    const Manifest manifest = load_manifest(o->split.manifest);
    ExperimentConfig cfg = experiment_config(o->split, o->model);
    cfg.folds = o->folds;
    cfg.shuffle_labels = o->shuffle_labels;
    const ScenarioKind kind = parse_scenario_kind(o->split.scenario);

    FoldReport report;
    if (o->model_file.empty()) {
      report = run_experiment(manifest, kind, cfg, o->split.seed);
    } else {
      if (o->folds.empty()) throw Error(ErrorCode::kInvalidArgument, "no fold given");
      DetectorModel model = load_model(o->model_file);
      if (o->model.threshold) model.threshold = *o->model.threshold;
      const int fold = o->folds.front();
      const Split split = make_splits(manifest, {kind, fold}, cfg.sizes, o->split.seed);
      FeatureTable features;
      extend_feature_table(features, manifest, split.test, cfg.frames_per_video, cfg.preprocess);
      const auto labels = split_labels(manifest, split, cfg.shuffle_labels, fold_seed(o->split.seed, fold));
      FoldResult r;
      r.fold = fold;
      r.confusion = evaluate_videos(model, split.test, features, labels);
      r.metrics = metrics(r.confusion);
      r.validation_accuracy = std::numeric_limits<double>::quiet_NaN();
      r.train_videos = split.train.size();
      r.test_videos = split.test.size();
      report.model_name = std::string(to_string(model.kind()));
      report.scenario = std::string(to_string(kind));
      report.seed = o->split.seed;
      report.folds = {r};
      report.average = r.metrics;
    }
    const json head = header(*sub);
    const std::string text = fold_report_to_json(report, head.dump());
    if (!o->json_path.empty()) write_text(o->json_path, text + "\n");
    if (!o->csv_path.empty()) {
      std::ostringstream csv;
      write_fold_report_csv(csv, report, comment_line(*sub));
      write_text(o->csv_path, csv.str());
    }
    ctx.out << text << '\n';
  });
}

}  // namespace

void add_detect_commands(CLI::App& app, Context& ctx) {
  add_split(app, ctx);
  add_train(app, ctx);
  add_eval(app, ctx);
}

}  // namespace smf::cli
