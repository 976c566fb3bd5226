#include "smf/features.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "smf/error.h"
#include "smf/frame_ops.h"
#include "smf/image_io.h"

namespace smf {

FrameFeatures extract_features(const Image& frame) {
  if (frame.height() != kFeatureSide || frame.width() != kFeatureSide ||
      frame.channels() != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature extraction needs a 96x96 grayscale frame, got " +
                    std::to_string(frame.height()) + "x" + std::to_string(frame.width()) +
                    "x" + std::to_string(frame.channels()));
  }
  validate_unit_range(frame, "frame");

  FrameFeatures f;
  constexpr int block = kFeatureSide / kBlockGrid;
  constexpr double pixels = kFeatureSide * kFeatureSide;
  for (int br = 0; br < kBlockGrid; ++br) {
    for (int bc = 0; bc < kBlockGrid; ++bc) {
      double sum = 0.0;
      for (int r = br * block; r < (br + 1) * block; ++r) {
        for (int c = bc * block; c < (bc + 1) * block; ++c) sum += frame.at(r, c);
      }
      f[static_cast<std::size_t>(br * kBlockGrid + bc)] = sum / (block * block);
    }
  }

  constexpr std::size_t intensity0 = kBlockGrid * kBlockGrid;
  constexpr std::size_t gradient0 = intensity0 + kIntensityBins;
  const double max_magnitude = std::sqrt(0.5);
  const int last = kFeatureSide - 1;
  std::array<int, kIntensityBins> intensity{};
  std::array<int, kGradientBins> gradient{};
  for (int r = 0; r < kFeatureSide; ++r) {
    for (int c = 0; c < kFeatureSide; ++c) {
      const double v = frame.at(r, c);
      const int ib = std::min(kIntensityBins - 1, static_cast<int>(v * kIntensityBins));
      ++intensity[static_cast<std::size_t>(ib)];

      const double gx =
          0.5 * (frame.at(r, std::min(c + 1, last)) - frame.at(r, std::max(c - 1, 0)));
      const double gy =
          0.5 * (frame.at(std::min(r + 1, last), c) - frame.at(std::max(r - 1, 0), c));
      const double mag = std::min(1.0, std::hypot(gx, gy) / max_magnitude);
      const int gb = std::min(kGradientBins - 1, static_cast<int>(mag * kGradientBins));
      ++gradient[static_cast<std::size_t>(gb)];
    }
  }
  for (std::size_t i = 0; i < intensity.size(); ++i) f[intensity0 + i] = intensity[i] / pixels;
  for (std::size_t i = 0; i < gradient.size(); ++i) f[gradient0 + i] = gradient[i] / pixels;
  return f;
}

std::vector<std::size_t> stride_indices(std::size_t available, std::size_t n) {
  std::vector<std::size_t> idx;
  if (available == 0 || n == 0) return idx;
  if (available <= n) {
    idx.resize(available);
    for (std::size_t i = 0; i < available; ++i) idx[i] = i;
    return idx;
  }
  idx.reserve(n);
  for (std::size_t i = 0; i < n; ++i) idx.push_back(i * available / n);
  return idx;
}

std::vector<std::filesystem::path> sample_frame_paths(const std::filesystem::path& dir,
                                                      std::size_t n) {
  const auto frames = list_frames(dir);
  if (frames.empty()) {
    throw Error(ErrorCode::kIo, "no frames found in " + dir.string());
  }
  std::vector<std::filesystem::path> picked;
  for (std::size_t i : stride_indices(frames.size(), n)) picked.push_back(frames[i]);
  return picked;
}

std::vector<Image> sample_frames(const std::filesystem::path& dir, std::size_t n) {
  std::vector<Image> out;
  for (const auto& p : sample_frame_paths(dir, n)) out.push_back(read_image(p));
  return out;
}

Image prepare_frame(const Image& raw, const FramePreprocess& pre) {
  Image gray = to_grayscale(raw);
  if (pre.sharpen) gray = sharpen(gray);
  return downsample(gray, pre.side);
}

std::vector<FrameFeatures> video_features(const std::filesystem::path& dir,
                                          std::size_t n, const FramePreprocess& pre) {
  std::vector<FrameFeatures> out;
  for (const auto& p : sample_frame_paths(dir, n)) {
    Image frame = prepare_frame(read_image(p), pre);
    // Area averaging can overshoot [0, 1] by an ulp.
    for (double& v : frame.data()) v = std::clamp(v, 0.0, 1.0);
    out.push_back(extract_features(frame));
  }
  return out;
}

}  // namespace smf
