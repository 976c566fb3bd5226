#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "commands.h"
#include "smf/error.h"
#include "smf/field_io.h"
#include "smf/frame_ops.h"
#include "smf/image_io.h"
#include "smf/losses.h"
#include "smf/motion.h"

namespace smf::cli {
namespace fs = std::filesystem;
namespace {

bool is_field(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".smf" || ext == ".smft";
}

Image load_any(const fs::path& p) { return is_field(p) ? read_field(p) : read_image(p); }

void save_field(const fs::path& p, const Image& field) {
  if (p.extension() == ".smft") {
    write_text(p, encode_smf_text(field));
  } else {
    write_smf(p, field);
  }
}

// Applies `fn` to one frame file, or to every frame of a directory (written
// under the same names into the output directory). Returns frame count.
template <typename Fn>
std::size_t map_frames(const fs::path& input, const fs::path& output, Fn fn) {
  if (!fs::is_directory(input)) {
    write_image(output, fn(0, read_image(input)));
    return 1;
  }
  const auto frames = list_frames(input);
  if (frames.empty()) throw Error(ErrorCode::kIo, "no frames found in " + input.string());
  fs::create_directories(output);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    write_image(output / frames[i].filename(), fn(static_cast<int>(i), read_image(frames[i])));
  }
  return frames.size();
}

WeightMode parse_mode(const std::string& s) {
  if (s == "distribution") return WeightMode::kDistribution;
  if (s == "softmax") return WeightMode::kSoftmax;
  throw Error(ErrorCode::kInvalidArgument, "unknown weight mode: " + s);
}

json vec(Vec2 v) { return json::array({v.row, v.col}); }

void add_crop(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string input, output, boxes;
    std::vector<int> box;
    CropConfig cfg;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("crop", "face-anchored square crop");
  sub->add_option("--input", o->input, "frame file or directory")->required()->check(CLI::ExistingPath);
  sub->add_option("--output", o->output, "output file or directory")->required();
  sub->add_option("--boxes", o->boxes, "JSON-lines face boxes keyed by frame_index")
      ->check(CLI::ExistingFile);
  sub->add_option("--box", o->box, "fixed box: top left height width")->expected(4);
  sub->add_option("--scale", o->cfg.scale, "window side in face heights");
  sub->add_option("--top-margin", o->cfg.top_margin, "headroom above the face in face heights");
  sub->add_option("--side", o->cfg.output_side, "output side in pixels");
  sub->callback([sub, o, &ctx] {
    if (o->boxes.empty() == o->box.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "give exactly one of --boxes or --box");
    }
    std::map<int, FaceBox> boxes;
    if (!o->boxes.empty()) boxes = load_face_boxes(o->boxes);
    json windows = json::array();
    const auto count = map_frames(o->input, o->output, [&](int i, const Image& frame) {
      FaceBox box;
      if (!o->box.empty()) {
        box = {o->box[0], o->box[1], o->box[2], o->box[3]};
      } else {
        auto it = boxes.find(i);
        if (it == boxes.end()) {
          throw Error(ErrorCode::kValidation, "no face box for frame " + std::to_string(i));
        }
        box = it->second;
      }
      const CropWindow w = crop_window(frame.grid(), box, o->cfg);
      windows.push_back({{"frame", i}, {"top", w.top}, {"left", w.left}, {"side", w.side}});
      return dynamic_crop(frame, box, o->cfg);
    });
    json doc = header(*sub);
    doc["frames"] = count;
    doc["windows"] = std::move(windows);
    print_json(ctx.out, doc);
  });
}

void add_enhance(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string input, output, mode = "enhance";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("enhance", "sharpen and/or smooth frames");
  sub->add_option("--input", o->input, "frame file or directory")->required()->check(CLI::ExistingPath);
  sub->add_option("--output", o->output, "output file or directory")->required();
  sub->add_option("--mode", o->mode, "sharpen, gaussian or enhance (sharpen then smooth)")
      ->check(CLI::IsMember({"sharpen", "gaussian", "enhance"}));
  sub->callback([sub, o, &ctx] {
    const auto count = map_frames(o->input, o->output, [&](int, const Image& frame) {
      if (o->mode == "sharpen") return sharpen(frame);
      if (o->mode == "gaussian") return gaussian_smooth(frame);
      return enhance(frame);
    });
    json doc = header(*sub);
    doc["frames"] = count;
    print_json(ctx.out, doc);
  });
}

void add_flow(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string source, driving, weights, output, source_image, warped, mode = "distribution";
    double temperature = 1.0;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("flow", "dense flow from per-region affine motion");
  sub->add_option("--source", o->source, "source heatmaps, SMF field with K channels")
      ->required()->check(CLI::ExistingFile);
  sub->add_option("--driving", o->driving, "driving heatmaps, SMF field with K channels")
      ->required()->check(CLI::ExistingFile);
  sub->add_option("--weights", o->weights, "region weights, K + 1 channels (background last)")
      ->required()->check(CLI::ExistingFile);
  sub->add_option("--output", o->output, "flow field (.smf binary, .smft text)")->required();
  sub->add_option("--mode", o->mode, "heatmap weighting: distribution or softmax")
      ->check(CLI::IsMember({"distribution", "softmax"}));
  sub->add_option("--temperature", o->temperature, "softmax temperature");
  sub->add_option("--source-image", o->source_image, "image to warp with the flow")
      ->check(CLI::ExistingFile);
  sub->add_option("--warped", o->warped, "where to write the warped source image");
  sub->callback([sub, o, &ctx] {
    if (o->source_image.empty() != o->warped.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "--source-image and --warped go together");
    }
    const auto src = heatmaps_from_image(read_field(o->source));
    const auto drv = heatmaps_from_image(read_field(o->driving));
    const RegionSet weights = region_set_from_image(read_field(o->weights));
    if (src.size() != drv.size() || src.size() != weights.k()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "region counts differ: source " + std::to_string(src.size()) + ", driving " +
                      std::to_string(drv.size()) + ", weights " + std::to_string(weights.k()));
    }
    ComposeOptions opts;
    opts.mode = parse_mode(o->mode);
    opts.temperature = o->temperature;
    std::vector<RegionMotion> motions;
    json regions = json::array();
    for (std::size_t k = 0; k < src.size(); ++k) {
      RegionMotion m{region_params(src[k], opts.mode, opts.temperature),
                     region_params(drv[k], opts.mode, opts.temperature)};
      regions.push_back({{"source_mean", vec(m.source.mean)}, {"driving_mean", vec(m.driving.mean)}});
      motions.push_back(m);
    }
    const FlowField flow = compose_flow(motions, weights, opts);
    save_field(o->output, to_image(flow));
    if (!o->warped.empty()) write_image(o->warped, warp_bilinear(read_image(o->source_image), flow));
    json doc = header(*sub);
    doc["regions"] = std::move(regions);
    print_json(ctx.out, doc);
  });
}

void add_warp(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string input, flow, output, confidence;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("warp", "backward bilinear warp");
  sub->add_option("--input", o->input, "source image")->required()->check(CLI::ExistingFile);
  sub->add_option("--flow", o->flow, "flow field, 2 channels (row, col)")
      ->required()->check(CLI::ExistingFile);
  sub->add_option("--output", o->output, "warped image")->required();
  sub->add_option("--confidence", o->confidence, "confidence map multiplied into the result")
      ->check(CLI::ExistingFile);
  sub->callback([sub, o, &ctx] {
    const Image src = load_any(o->input);
    Image warped = warp_bilinear(src, flow_from_image(read_field(o->flow)));
    if (!o->confidence.empty()) {
      warped = apply_confidence(warped, confidence_from_image(load_any(o->confidence)));
    }
    if (is_field(o->output)) {
      save_field(o->output, warped);
    } else {
      write_image(o->output, warped);
    }
    json doc = header(*sub);
    doc["height"] = warped.height();
    doc["width"] = warped.width();
    print_json(ctx.out, doc);
  });
}

void add_loss_check(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string prediction, target, reduction = "mean";
    double epsilon = 1e-3;
    double step = 1e-5;
    int samples = 16;
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("loss-check", "losses between two images plus a gradient check");
  sub->add_option("--prediction", o->prediction, "image or SMF field")->required()->check(CLI::ExistingFile);
  sub->add_option("--target", o->target, "image or SMF field")->required()->check(CLI::ExistingFile);
  sub->add_option("--epsilon", o->epsilon, "Charbonnier epsilon")->check(CLI::PositiveNumber);
  sub->add_option("--reduction", o->reduction, "mean or sum")->check(CLI::IsMember({"mean", "sum"}));
  sub->add_option("--samples", o->samples, "entries checked by central differences")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--step", o->step, "finite-difference step")->check(CLI::PositiveNumber);
  sub->add_option("--seed", o->seed, "picks the checked entries");
  sub->callback([sub, o, &ctx] {
    Image pred = load_any(o->prediction);
    const Image target = load_any(o->target);
    const LossParams params{o->epsilon, o->reduction == "sum" ? Reduction::kSum : Reduction::kMean};
    const double loss = charbonnier_loss(pred, target, params);
    const Image grad = charbonnier_grad(pred, target, params);

    std::mt19937_64 rng(o->seed);
    double worst = 0.0;
    for (int s = 0; s < o->samples; ++s) {
      const auto i = static_cast<std::size_t>(rng() % pred.size());
      double& x = pred.data()[i];
      const double saved = x;
      x = saved + o->step;
      const double up = charbonnier_loss(pred, target, params);
      x = saved - o->step;
      const double down = charbonnier_loss(pred, target, params);
      x = saved;
      const double numeric = (up - down) / (2.0 * o->step);
      const double analytic = grad.data()[i];
      const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-300});
      worst = std::max(worst, std::abs(numeric - analytic) / scale);
    }
    json doc = header(*sub);
    doc["l1"] = l1_loss(pred, target, params.reduction);
    doc["l2"] = l2_loss(pred, target, params.reduction);
    doc["charbonnier"] = loss;
    doc["gradient_check"] = {{"samples", o->samples}, {"max_relative_error", worst}};
    print_json(ctx.out, doc);
  });
}

}  // namespace

void add_image_commands(CLI::App& app, Context& ctx) {
  add_crop(app, ctx);
  add_enhance(app, ctx);
  add_flow(app, ctx);
  add_warp(app, ctx);
  add_loss_check(app, ctx);
}

}  // namespace smf::cli
