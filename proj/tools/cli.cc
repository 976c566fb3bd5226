#include "cli.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string_view>

#include "commands.h"
#include "smf/error.h"
#include "smf/version.h"

namespace smf::cli {
namespace {

constexpr std::array<std::string_view, 12> kCommands = {
    "crop",  "enhance",    "flow",   "warp", "loss-check", "compare-transcripts", "report-linguistic",
    "split", "detect-train", "detect-eval", "stats", "reconstruct-interpreter"};

constexpr std::string_view kUsage = R"(usage: smf <command> [options]

commands:
  crop                     face-anchored square crop of a frame or frame directory
  enhance                  sharpen / Gaussian-smooth frames
  flow                     compose a dense flow from region heatmaps
  warp                     backward-warp an image through a flow field
  loss-check               L1 / L2 / Charbonnier losses and a gradient check
  compare-transcripts      per-pair similarity metrics for real/fake transcripts
  report-linguistic        metric distributions from similarity records
  split                    train / validation / test split of a manifest
  detect-train             train a frame classifier on one fold
  detect-eval              per-fold detection metrics with majority voting
  stats                    dataset statistics of a manifest
  reconstruct-interpreter  confusion matrix from reported metrics

run `smf <command> --help` for options
)";

void print_error(std::ostream& err, std::string_view kind, std::string_view message) {
  err << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

json params_of(const CLI::App& sub) {
  json params = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt == sub.get_help_ptr()) continue;
    const std::string key = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (opt->get_type_size() == 0) {
      params[key] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& r = opt->results();
      params[key] = r.size() == 1 ? json(r.front()) : json(r);
    } else if (!opt->get_default_str().empty()) {
      params[key] = opt->get_default_str();
    } else {
      params[key] = nullptr;
    }
  }
  return params;
}

json header(const CLI::App& sub) {
  return {{"tool", "smf"},
          {"version", version()},
          {"command", sub.get_name()},
          {"params", params_of(sub)}};
}

std::string comment_line(const CLI::App& sub) {
  return "smf " + std::string(version()) + ' ' + sub.get_name() + ' ' + params_of(sub).dump();
}

void print_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (!args.empty() && (args[0] == "-h" || args[0] == "--help")) {
    out << kUsage;
    return 0;
  }
  if (!args.empty() && args[0] == "--version") {
    out << "smf " << version() << '\n';
    return 0;
  }
  if (args.empty() || std::find(kCommands.begin(), kCommands.end(), args[0]) == kCommands.end()) {
    if (!args.empty()) err << "smf: unknown command '" << args[0] << "'\n\n";
    err << kUsage;
    return 2;
  }

  CLI::App app{"smf", "smf"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  Context ctx{out, err};
  add_image_commands(app, ctx);
  add_text_commands(app, ctx);
  add_detect_commands(app, ctx);
  add_stats_commands(app, ctx);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    print_error(err, "usage", e.what());
    return 1;
  } catch (const Error& e) {
    print_error(err, error_code_name(e.code()), e.what());
    return 1;
  } catch (const json::exception& e) {
    print_error(err, "parse", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace smf::cli
