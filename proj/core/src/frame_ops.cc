#include "smf/frame_ops.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "smf/error.h"

namespace smf {
namespace {

constexpr int kMinFrameSide = 16;

void require_filterable(const Image& img) {
  if (img.height() < 3 || img.width() < 3) {
    throw Error(ErrorCode::kInvalidArgument, "image too small for a 3x3 filter");
  }
}

Image clamp_unit(Image img) {
  for (double& v : img.data()) v = std::clamp(v, 0.0, 1.0);
  return img;
}

// Row i holds (input index, weight) pairs covering output pixel i when
// `in` pixels are averaged down to `out` pixels.
std::vector<std::vector<std::pair<int, double>>> area_weights(int in, int out) {
  std::vector<std::vector<std::pair<int, double>>> weights(static_cast<std::size_t>(out));
  const double step = static_cast<double>(in) / out;
  for (int i = 0; i < out; ++i) {
    const double lo = i * step;
    const double hi = (i + 1) * step;
    for (int j = static_cast<int>(std::floor(lo)); j < in && j < hi; ++j) {
      const double overlap = std::min<double>(hi, j + 1) - std::max<double>(lo, j);
      if (overlap > 0.0) weights[static_cast<std::size_t>(i)].emplace_back(j, overlap / step);
    }
  }
  return weights;
}

}  // namespace

CropWindow crop_window(Grid2D frame, const FaceBox& box, const CropConfig& cfg) {
  if (frame.height < kMinFrameSide || frame.width < kMinFrameSide) {
    throw Error(ErrorCode::kInvalidArgument, "frame smaller than 16 pixels");
  }
  if (!(cfg.scale > 0.0) || !std::isfinite(cfg.scale) || !std::isfinite(cfg.top_margin)) {
    throw Error(ErrorCode::kInvalidArgument, "crop scale must be positive");
  }
  if (cfg.output_side < kMinFrameSide) {
    throw Error(ErrorCode::kInvalidArgument, "crop output side must be at least 16");
  }
  if (box.height <= 0 || box.width <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "face box must have positive size");
  }
  if (box.top >= frame.height || box.left >= frame.width ||
      box.top + box.height <= 0 || box.left + box.width <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "face box lies outside the frame");
  }

  int side = static_cast<int>(std::lround(cfg.scale * box.height));
  side = std::clamp(side, 1, std::min(frame.height, frame.width));
  const double center_col = box.left + 0.5 * box.width;
  int top = static_cast<int>(std::lround(box.top - cfg.top_margin * box.height));
  int left = static_cast<int>(std::lround(center_col - 0.5 * side));
  top = std::clamp(top, 0, frame.height - side);
  left = std::clamp(left, 0, frame.width - side);
  return {top, left, side};
}

Image resize_bilinear(const Image& img, int height, int width) {
  if (height < 1 || width < 1) {
    throw Error(ErrorCode::kInvalidArgument, "resize target must be positive");
  }
  if (height == img.height() && width == img.width()) return img;
  Image out(height, width, img.channels());
  const double sr = static_cast<double>(img.height()) / height;
  const double sc = static_cast<double>(img.width()) / width;
  for (int r = 0; r < height; ++r) {
    const double y = std::clamp((r + 0.5) * sr - 0.5, 0.0, img.height() - 1.0);
    const int y0 = static_cast<int>(std::floor(y));
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double fy = y - y0;
    for (int c = 0; c < width; ++c) {
      const double x = std::clamp((c + 0.5) * sc - 0.5, 0.0, img.width() - 1.0);
      const int x0 = static_cast<int>(std::floor(x));
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double fx = x - x0;
      for (int ch = 0; ch < img.channels(); ++ch) {
        const double top = (1 - fx) * img.at(y0, x0, ch) + fx * img.at(y0, x1, ch);
        const double bot = (1 - fx) * img.at(y1, x0, ch) + fx * img.at(y1, x1, ch);
        out.at(r, c, ch) = (1 - fy) * top + fy * bot;
      }
    }
  }
  return out;
}

Image dynamic_crop(const Image& frame, const FaceBox& box, const CropConfig& cfg) {
  const CropWindow win = crop_window(frame.grid(), box, cfg);
  Image window(win.side, win.side, frame.channels());
  for (int r = 0; r < win.side; ++r) {
    for (int c = 0; c < win.side; ++c) {
      for (int ch = 0; ch < frame.channels(); ++ch) {
        window.at(r, c, ch) = frame.at(win.top + r, win.left + c, ch);
      }
    }
  }
  return resize_bilinear(window, cfg.output_side, cfg.output_side);
}

Image filter3x3(const Image& img, const Kernel3& kernel) {
  require_filterable(img);
  double kernel_sum = 0.0;
  for (const auto& row : kernel) {
    for (double k : row) kernel_sum += k;
  }
  const int h = img.height();
  const int w = img.width();
  Image out(h, w, img.channels());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int ch = 0; ch < img.channels(); ++ch) {
        const double center = img.at(r, c, ch);
        double acc = 0.0;
        for (int dr = -1; dr <= 1; ++dr) {
          const int rr = std::clamp(r + dr, 0, h - 1);
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const int cc = std::clamp(c + dc, 0, w - 1);
            acc += kernel[dr + 1][dc + 1] * (img.at(rr, cc, ch) - center);
          }
        }
        out.at(r, c, ch) = (kernel_sum == 1.0 ? center : kernel_sum * center) + acc;
      }
    }
  }
  return out;
}

Image sharpen(const Image& img) { return clamp_unit(filter3x3(img, kSharpenKernel)); }

Image gaussian_smooth(const Image& img) { return filter3x3(img, kGaussianKernel); }

Image enhance(const Image& img) { return gaussian_smooth(sharpen(img)); }

Image downsample(const Image& img, int side) {
  if (side < 1 || side > img.height() || side > img.width()) {
    throw Error(ErrorCode::kInvalidArgument,
                "downsample side " + std::to_string(side) + " outside [1, " +
                    std::to_string(std::min(img.height(), img.width())) + "]");
  }
  if (side == img.height() && side == img.width()) return img;
  const auto rw = area_weights(img.height(), side);
  const auto cw = area_weights(img.width(), side);

  Image rows(side, img.width(), img.channels());
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < img.width(); ++c) {
      for (int ch = 0; ch < img.channels(); ++ch) {
        double acc = 0.0;
        for (const auto& [j, wgt] : rw[static_cast<std::size_t>(r)]) acc += wgt * img.at(j, c, ch);
        rows.at(r, c, ch) = acc;
      }
    }
  }
  Image out(side, side, img.channels());
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      for (int ch = 0; ch < img.channels(); ++ch) {
        double acc = 0.0;
        for (const auto& [j, wgt] : cw[static_cast<std::size_t>(c)]) acc += wgt * rows.at(r, j, ch);
        out.at(r, c, ch) = acc;
      }
    }
  }
  return out;
}

Image upsample_nearest(const Image& img, int factor) {
  if (factor < 1) throw Error(ErrorCode::kInvalidArgument, "upsample factor must be >= 1");
  Image out(img.height() * factor, img.width() * factor, img.channels());
  for (int r = 0; r < out.height(); ++r) {
    for (int c = 0; c < out.width(); ++c) {
      for (int ch = 0; ch < img.channels(); ++ch) {
        out.at(r, c, ch) = img.at(r / factor, c / factor, ch);
      }
    }
  }
  return out;
}

std::map<int, FaceBox> load_face_boxes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::map<int, FaceBox> boxes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const int index = j.at("frame_index").get<int>();
      FaceBox box{j.at("top").get<int>(), j.at("left").get<int>(),
                  j.at("height").get<int>(), j.at("width").get<int>()};
      if (!boxes.emplace(index, box).second) {
        throw Error(ErrorCode::kDuplicateId,
                    path.string() + ":" + std::to_string(line_no) +
                        ": duplicate frame_index " + std::to_string(index));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return boxes;
}

}  // namespace smf
