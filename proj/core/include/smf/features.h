#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <vector>

#include "smf/image.h"

namespace smf {

inline constexpr int kFeatureSide = 96;
inline constexpr int kBlockGrid = 8;          // 8x8 blocks of 12x12 pixels
inline constexpr int kIntensityBins = 32;
inline constexpr int kGradientBins = 16;
inline constexpr int kFeatureDim =
    kBlockGrid * kBlockGrid + kIntensityBins + kGradientBins;  // 112

/// Per-frame descriptor, every entry in [0, 1]:
///   [0, 64)    block means, row-major over the 8x8 block grid
///   [64, 96)   intensity histogram (mass per bin)
///   [96, 112)  gradient-magnitude histogram (mass per bin); central
///              differences with edge replication, magnitude divided by its
///              maximum sqrt(2)/2
struct FrameFeatures {
  std::array<double, kFeatureDim> values{};

  double operator[](std::size_t i) const noexcept { return values[i]; }
  double& operator[](std::size_t i) noexcept { return values[i]; }
  bool operator==(const FrameFeatures&) const = default;
};

/// Requires a 96x96 single-channel frame with values in [0, 1].
FrameFeatures extract_features(const Image& frame);

/// Uniform-stride selection of min(n, available) indices:
/// floor(i * available / n) for i < n.
std::vector<std::size_t> stride_indices(std::size_t available, std::size_t n);

/// Frame files of `dir` (sorted by name) picked by stride_indices.
std::vector<std::filesystem::path> sample_frame_paths(const std::filesystem::path& dir,
                                                      std::size_t n = 100);

/// Loads the sampled frames of `dir`.
std::vector<Image> sample_frames(const std::filesystem::path& dir, std::size_t n = 100);

struct FramePreprocess {
  bool sharpen = true;  // applied at native resolution, before downsampling
  int side = kFeatureSide;
};

/// Grayscale, optional sharpening, then area downsampling to side x side.
Image prepare_frame(const Image& raw, const FramePreprocess& pre = {});

/// Sample, prepare and describe the frames of one video directory.
std::vector<FrameFeatures> video_features(const std::filesystem::path& dir,
                                          std::size_t n = 100,
                                          const FramePreprocess& pre = {});

}  // namespace smf
