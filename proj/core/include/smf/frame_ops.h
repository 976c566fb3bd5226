#pragma once

#include <array>
#include <filesystem>
#include <map>

#include "smf/image.h"

namespace smf {

/// Face bounding box in frame pixels, as produced by an external detector.
struct FaceBox {
  int top = 0;
  int left = 0;
  int height = 0;
  int width = 0;
};

/// Per-subject crop geometry. The crop is a square of side
/// round(scale * face height), centered horizontally on the face, with its
/// top edge top_margin face-heights above the face.
struct CropConfig {
  double scale = 4.0;
  double top_margin = 0.5;
  int output_side = 384;
};

/// Square crop window in frame coordinates, half-open [top, top+side).
struct CropWindow {
  int top = 0;
  int left = 0;
  int side = 0;
};

CropWindow crop_window(Grid2D frame, const FaceBox& box, const CropConfig& cfg);

/// Crops the face-anchored window and resizes it (bilinear) to
/// output_side x output_side.
Image dynamic_crop(const Image& frame, const FaceBox& box, const CropConfig& cfg);

/// Bilinear resize with half-pixel-center alignment.
Image resize_bilinear(const Image& img, int height, int width);

using Kernel3 = std::array<std::array<double, 3>, 3>;

inline constexpr Kernel3 kSharpenKernel = {{{-1, -1, -1}, {-1, 9, -1}, {-1, -1, -1}}};
inline constexpr Kernel3 kGaussianKernel = {
    {{1.0 / 16, 2.0 / 16, 1.0 / 16},
     {2.0 / 16, 4.0 / 16, 2.0 / 16},
     {1.0 / 16, 2.0 / 16, 1.0 / 16}}};

/// 3x3 filter with edge replication, no clamping. Evaluated as
/// center * sum(k) + sum_j k_j * (neighbor_j - center), which leaves constant
/// regions bit-exact for kernels summing to one.
Image filter3x3(const Image& img, const Kernel3& kernel);

/// Sharpening filter followed by a clamp to [0, 1].
Image sharpen(const Image& img);

/// Normalized 3x3 Gaussian (1 2 1 / 2 4 2 / 1 2 1, divided by 16).
Image gaussian_smooth(const Image& img);

/// gaussian_smooth(sharpen(img)).
Image enhance(const Image& img);

/// Area-average resampling to side x side.
Image downsample(const Image& img, int side);

/// Nearest-neighbour upsampling by an integer factor.
Image upsample_nearest(const Image& img, int factor);

/// JSON-lines face boxes: {"frame_index", "top", "left", "height", "width"}.
std::map<int, FaceBox> load_face_boxes(const std::filesystem::path& path);

}  // namespace smf
