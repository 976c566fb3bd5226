#include <memory>

#include "commands.h"
#include "smf/eval_stats.h"

namespace smf::cli {
namespace {

void add_stats(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string manifest, scope = "fake", format = "table";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("stats", "dataset statistics");
  sub->add_option("--manifest", o->manifest, "JSON-lines manifest")->required()->check(CLI::ExistingFile);
  sub->add_option("--scope", o->scope, "records counted: fake, real or all")
      ->check(CLI::IsMember({"fake", "real", "all"}));
  sub->add_option("--format", o->format, "table or json")->check(CLI::IsMember({"table", "json"}));
  sub->callback([sub, o, &ctx] {
    const StatsReport report = dataset_stats(load_manifest(o->manifest), parse_stats_scope(o->scope));
    if (o->format == "table") {
      ctx.out << "# " << comment_line(*sub) << '\n' << stats_to_table(report);
      return;
    }
    json doc = header(*sub);
    doc["stats"] = json::parse(stats_to_json(report));
    print_json(ctx.out, doc);
  });
}

void add_reconstruct(CLI::App& app, Context& ctx) {
  struct Opts {
    std::size_t real = 0, fake = 0;
    MetricTriple target;
    double tol = 5e-5;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("reconstruct-interpreter",
                                 "confusion matrix matching reported sensitivity/specificity/accuracy");
  sub->add_option("--real", o->real, "real videos shown")->required()->check(CLI::PositiveNumber);
  sub->add_option("--fake", o->fake, "fake videos shown")->required()->check(CLI::PositiveNumber);
  sub->add_option("--sens", o->target.sensitivity, "sensitivity")->required()->check(CLI::Range(0.0, 1.0));
  sub->add_option("--spec", o->target.specificity, "specificity")->required()->check(CLI::Range(0.0, 1.0));
  sub->add_option("--acc", o->target.accuracy, "accuracy")->required()->check(CLI::Range(0.0, 1.0));
  sub->add_option("--tol", o->tol, "per-metric tolerance")->check(CLI::PositiveNumber);
  sub->callback([sub, o, &ctx] {
    const ConfusionMatrix cm = reconstruct_confusion(o->real, o->fake, o->target, o->tol);
    const MetricTriple m = metrics(cm);
    json doc = header(*sub);
    doc["confusion"] = {{"tp", cm.tp}, {"fn", cm.fn}, {"tn", cm.tn}, {"fp", cm.fp}};
    doc["metrics"] = {{"sensitivity", m.sensitivity}, {"specificity", m.specificity}, {"accuracy", m.accuracy}};
    print_json(ctx.out, doc);
  });
}

}  // namespace

void add_stats_commands(CLI::App& app, Context& ctx) {
  add_stats(app, ctx);
  add_reconstruct(app, ctx);
}

}  // namespace smf::cli
