#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "smf/image.h"
#include "smf/manifest.h"
#include "smf/motion.h"

namespace smf::testing {

/// Uniform double in [lo, hi) from the top 53 bits; identical on every
/// standard library, unlike std::uniform_real_distribution.
double uniform(std::mt19937_64& rng, double lo, double hi);

/// Sampled (unnormalized) Gaussian exp(-0.5 (z-mu)^T cov^{-1} (z-mu)).
Heatmap gaussian_heatmap(Grid2D grid, Vec2 mean, const Mat2& cov);

/// Sum of a few low-frequency sinusoids, values in [0.1, 0.9].
Image smooth_image(int height, int width, std::uint64_t seed);

/// Random image with entries uniform in [lo, hi).
Image random_image(int height, int width, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0);

/// Directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

struct SyntheticOptions {
  int clusters = 5;             // identity clusters (4 subjects each)
  int videos_per_class = 5;     // per subject
  int frames_per_video = 20;
  double artifact_amplitude = 0.1;
  std::uint64_t seed = 1;
};

/// Writes frames and manifest.jsonl under `root` and returns the loaded
/// manifest. Subjects come in clusters of four; fakes of subjects 0 and 2 of
/// a cluster are driven by real videos of subject 1, fakes of subjects 1 and
/// 3 by real videos of subject 2, so those driving videos are used twice.
/// Real frames are smooth blobs with low noise; fake frames add a
/// checkerboard of 2x2-pixel cells.
Manifest write_synthetic_dataset(const std::filesystem::path& root, const SyntheticOptions& opts = {});

}  // namespace smf::testing
