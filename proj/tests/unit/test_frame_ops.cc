#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "smf/error.h"
#include "smf/frame_ops.h"
#include "synthetic.h"

namespace smf {
namespace {

Image ramp(int h, int w) {
  Image img(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) img.at(r, c) = (2.0 * r + c) / 64.0;
  return img;
}

TEST(Crop, ReferenceGeometry) {
  const CropWindow w = crop_window(make_grid(1000, 1000), {100, 450, 100, 100}, {4.0, 0.5, 384});
  EXPECT_EQ(w.side, 400);
  EXPECT_EQ(w.top, 50);
  EXPECT_EQ(w.left, 300);
  const Image out = dynamic_crop(Image(1000, 1000, 1, 0.5), {100, 450, 100, 100}, {4.0, 0.5, 384});
  EXPECT_EQ(out.height(), 384);
  EXPECT_EQ(out.width(), 384);
}

TEST(Crop, ClampsAtFrameEdge) {
  const CropWindow w = crop_window(make_grid(1000, 1000), {300, 0, 100, 100}, {4.0, 0.5, 384});
  EXPECT_EQ(w.left, 0);
  EXPECT_EQ(w.side, 400);
  const CropWindow top = crop_window(make_grid(1000, 1000), {10, 500, 100, 100}, {4.0, 0.5, 384});
  EXPECT_EQ(top.top, 0);
}

TEST(Crop, SaturatedWindowIsLargestCenteredSquare) {
  const CropWindow w = crop_window(make_grid(200, 300), {60, 125, 50, 50}, {10.0, 0.5, 64});
  EXPECT_EQ(w.side, 200);
  EXPECT_EQ(w.top, 0);
  EXPECT_EQ(w.left, 50);
}

TEST(Crop, OutputSideOnEveryPath) {
  std::mt19937_64 rng(12);
  const Image frame = testing::random_image(120, 90, rng);
  for (const FaceBox box : {FaceBox{0, 0, 20, 20}, FaceBox{100, 70, 20, 20}, FaceBox{40, 30, 30, 30}}) {
    for (double scale : {0.5, 2.0, 9.0}) {
      const Image out = dynamic_crop(frame, box, {scale, 0.5, 48});
      EXPECT_EQ(out.height(), 48);
      EXPECT_EQ(out.width(), 48);
    }
  }
}

TEST(Crop, Errors) {
  const Grid2D g = make_grid(100, 100);
  EXPECT_THROW(crop_window(g, {200, 10, 10, 10}, {}), Error);
  EXPECT_THROW(crop_window(g, {10, 10, 0, 10}, {}), Error);
  EXPECT_THROW(crop_window(make_grid(10, 100), {1, 1, 5, 5}, {}), Error);
  EXPECT_THROW(crop_window(g, {10, 10, 10, 10}, {0.0, 0.5, 384}), Error);
  EXPECT_THROW(crop_window(g, {10, 10, 10, 10}, {1.0, 0.5, 8}), Error);
}

TEST(Resize, ConstantStaysConstant) {
  const Image out = resize_bilinear(Image(10, 7, 1, 0.25), 13, 4);
  for (double v : out.data()) EXPECT_NEAR(v, 0.25, 1e-15);
}

TEST(Kernels, SumToOne) {
  double s = 0, g = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      s += kSharpenKernel[i][j];
      g += kGaussianKernel[i][j];
    }
  }
  EXPECT_EQ(s, 1.0);
  EXPECT_EQ(g, 1.0);
}

TEST(Sharpen, ConstantImage) {
  const Image result = sharpen(Image(6, 6, 1, 0.37));
  for (double v : result.data()) EXPECT_EQ(v, 0.37);
}

TEST(Sharpen, ImpulseClampsNeighbours) {
  Image img(5, 5);
  img.at(2, 2) = 0.1;
  const Image raw = filter3x3(img, kSharpenKernel);
  EXPECT_NEAR(raw.at(1, 1), -0.1, 1e-15);
  const Image out = sharpen(img);
  EXPECT_NEAR(out.at(2, 2), 0.9, 1e-15);
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc)
      if (dr || dc) EXPECT_EQ(out.at(2 + dr, 2 + dc), 0.0);
}

TEST(Sharpen, RampInteriorUnchanged) {
  const Image img = ramp(8, 10);
  const Image out = sharpen(img);
  for (int r = 1; r < 7; ++r)
    for (int c = 1; c < 9; ++c) EXPECT_NEAR(out.at(r, c), img.at(r, c), 1e-14);
}

TEST(Sharpen, TooSmall) { EXPECT_THROW(sharpen(Image(2, 5)), Error); }

TEST(Gaussian, ConstantImage) {
  const Image result = gaussian_smooth(Image(5, 4, 1, 0.61));
  for (double v : result.data()) EXPECT_EQ(v, 0.61);
}

TEST(Gaussian, ImpulseResponseIsKernel) {
  Image img(7, 7);
  img.at(3, 3) = 1.0;
  const Image out = gaussian_smooth(img);
  for (int r = 0; r < 7; ++r) {
    for (int c = 0; c < 7; ++c) {
      const bool inside = std::abs(r - 3) <= 1 && std::abs(c - 3) <= 1;
      EXPECT_EQ(out.at(r, c), inside ? kGaussianKernel[r - 2][c - 2] : 0.0);
    }
  }
}

TEST(Gaussian, EqualsSeparablePasses) {
  // Dyadic values keep every intermediate sum exact.
  std::mt19937_64 rng(31);
  Image img(9, 11);
  for (double& v : img.data()) v = static_cast<double>(rng() % 256) / 256.0;
  const auto at = [&](const Image& im, int r, int c) {
    return im.at(std::clamp(r, 0, im.height() - 1), std::clamp(c, 0, im.width() - 1));
  };
  Image rows(9, 11), both(9, 11);
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 11; ++c)
      rows.at(r, c) = (at(img, r, c - 1) + 2 * at(img, r, c) + at(img, r, c + 1)) / 4;
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 11; ++c)
      both.at(r, c) = (at(rows, r - 1, c) + 2 * at(rows, r, c) + at(rows, r + 1, c)) / 4;
  EXPECT_EQ(gaussian_smooth(img), both);
}

TEST(Enhance, ConstantAndRamp) {
  const Image result = enhance(Image(6, 6, 1, 0.2));
  for (double v : result.data()) EXPECT_EQ(v, 0.2);
  const Image img = ramp(10, 10);
  const Image out = enhance(img);
  for (int r = 2; r < 8; ++r)
    for (int c = 2; c < 8; ++c) EXPECT_NEAR(out.at(r, c), img.at(r, c), 1e-14);
}

TEST(Enhance, IsSmoothAfterSharpenAndStaysInRange) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const Image img = testing::random_image(12, 9, rng);
    const Image out = enhance(img);
    EXPECT_EQ(out, gaussian_smooth(sharpen(img)));
    for (double v : out.data()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Downsample, ConstantImage) {
  const Image result = downsample(Image(384, 384, 1, 0.3), 96);
  for (double v : result.data()) EXPECT_NEAR(v, 0.3, 1e-15);
}

TEST(Downsample, CheckerboardHalves) {
  Image img(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) img.at(r, c) = (r + c) % 2;
  const Image result = downsample(img, 2);
  for (double v : result.data()) EXPECT_EQ(v, 0.5);
}

TEST(Downsample, IdentityAndMeanPreservation) {
  std::mt19937_64 rng(2);
  const Image img = testing::random_image(24, 24, rng);
  EXPECT_EQ(downsample(img, 24), img);
  double a = 0, b = 0;
  for (double v : img.data()) a += v;
  const Image small = downsample(img, 6);
  for (double v : small.data()) b += v;
  EXPECT_NEAR(a / 576.0, b / 36.0, 1e-6);
  EXPECT_THROW(downsample(img, 0), Error);
  EXPECT_THROW(downsample(img, 25), Error);
}

TEST(Downsample, NonIntegerRatioKeepsConstants) {
  const Image result = downsample(Image(10, 10, 1, 0.8), 3);
  for (double v : result.data()) EXPECT_NEAR(v, 0.8, 1e-14);
}

TEST(Downsample, IdempotentAfterNearestUpsample) {
  std::mt19937_64 rng(3);
  const Image img = testing::random_image(32, 32, rng);
  const Image once = downsample(img, 8);
  const Image again = downsample(upsample_nearest(once, 4), 8);
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_NEAR(again.data()[i], once.data()[i], 1e-14);
}

TEST(FaceBoxes, LoadsAndRejectsDuplicates) {
  testing::TempDir dir("boxes");
  const auto path = dir.path() / "boxes.jsonl";
  std::ofstream(path) << R"({"frame_index": 1, "top": 5, "left": 6, "height": 7, "width": 8})"
                      << "\n\n"
                      << R"({"frame_index": 0, "top": 1, "left": 2, "height": 3, "width": 4})"
                      << "\n";
  const auto boxes = load_face_boxes(path);
  ASSERT_EQ(boxes.size(), 2u);
  EXPECT_EQ(boxes.at(1).width, 8);
  std::ofstream(path, std::ios::app) << R"({"frame_index": 1, "top": 0, "left": 0, "height": 1, "width": 1})"
                                     << "\n";
  try {
    load_face_boxes(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateId);
    EXPECT_NE(std::string(e.what()).find(":4:"), std::string::npos);
  }
}

}  // namespace
}  // namespace smf
