#include <cmath>
#include <fstream>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "smf/error.h"
#include "smf/field_io.h"
#include "smf/image.h"
#include "smf/image_io.h"
#include "synthetic.h"

namespace smf {
namespace {

using testing::TempDir;

TEST(Mat2, InverseTimesMatrixIsIdentity) {
  const Mat2 m{2.0, 1.0, -1.0, 3.0};
  const Mat2 p = m * inverse(m);
  EXPECT_NEAR(p.a, 1.0, 1e-15);
  EXPECT_NEAR(p.b, 0.0, 1e-15);
  EXPECT_NEAR(p.c, 0.0, 1e-15);
  EXPECT_NEAR(p.d, 1.0, 1e-15);
}

TEST(Mat2, SingularInverseThrows) {
  try {
    inverse(Mat2{1.0, 2.0, 2.0, 4.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingular);
  }
}

TEST(Mat2, ConditionNumberMatchesSvd) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Mat2 m{testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2),
                 testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2)};
    Eigen::Matrix2d e;
    e << m.a, m.b, m.c, m.d;
    const Eigen::Vector2d s = Eigen::JacobiSVD<Eigen::Matrix2d>(e).singularValues();
    EXPECT_NEAR(condition_number(m), s(0) / s(1), 1e-8 * s(0) / s(1));
  }
  EXPECT_TRUE(std::isinf(condition_number(Mat2{1, 1, 1, 1})));
}

TEST(Grid, RejectsEmpty) {
  EXPECT_THROW(make_grid(0, 3), Error);
  EXPECT_EQ(make_grid(2, 3).size(), 6u);
}

TEST(Image, UnitRangeValidation) {
  Image img(2, 2, 1, 0.5);
  EXPECT_NO_THROW(validate_unit_range(img, "img"));
  img.at(1, 1) = 1.5;
  EXPECT_THROW(validate_unit_range(img, "img"), Error);
  img.at(1, 1) = std::nan("");
  EXPECT_THROW(validate_finite(img, "img"), Error);
}

TEST(Image, GrayscaleLuma) {
  Image rgb(1, 1, 3);
  rgb.at(0, 0, 0) = 1.0;
  EXPECT_NEAR(to_grayscale(rgb).at(0, 0), 0.299, 1e-12);
}

Image quantized(int h, int w, int ch, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Image img(h, w, ch);
  for (double& v : img.data()) v = static_cast<double>(rng() % 256) / 255.0;
  return img;
}

TEST(ImageIo, RoundTripsEveryFormat) {
  TempDir dir("imgio");
  for (const char* ext : {".png", ".pgm"}) {
    const Image img = quantized(7, 5, 1, 1);
    const auto path = dir.path() / (std::string("g") + ext);
    write_image(path, img);
    const Image back = read_image(path);
    ASSERT_TRUE(back.same_shape(img));
    for (std::size_t i = 0; i < img.size(); ++i) EXPECT_NEAR(back.data()[i], img.data()[i], 1e-12);
  }
  for (const char* ext : {".png", ".ppm"}) {
    const Image img = quantized(4, 6, 3, 2);
    const auto path = dir.path() / (std::string("c") + ext);
    write_image(path, img);
    const Image back = read_image(path);
    ASSERT_TRUE(back.same_shape(img));
    for (std::size_t i = 0; i < img.size(); ++i) EXPECT_NEAR(back.data()[i], img.data()[i], 1e-12);
  }
}

TEST(ImageIo, AsciiPgm) {
  TempDir dir("ascii");
  const auto path = dir.path() / "a.pgm";
  std::ofstream(path) << "P2\n# comment\n2 1\n4\n0 4\n";
  const Image img = read_image(path);
  EXPECT_EQ(img.height(), 1);
  EXPECT_EQ(img.width(), 2);
  EXPECT_DOUBLE_EQ(img.at(0, 1), 1.0);
}

TEST(ImageIo, MissingAndCorruptFiles) {
  TempDir dir("bad");
  EXPECT_THROW(read_image(dir.path() / "none.png"), Error);
  const auto path = dir.path() / "bad.png";
  std::ofstream(path) << "not an image";
  EXPECT_THROW(read_image(path), Error);
}

TEST(ImageIo, ListFramesSortedAndFiltered) {
  TempDir dir("list");
  const Image img(2, 2);
  write_image(dir.path() / "b.png", img);
  write_image(dir.path() / "a.pgm", img);
  std::ofstream(dir.path() / "notes.txt") << "x";
  const auto frames = list_frames(dir.path());
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[0].filename(), "a.pgm");
  EXPECT_EQ(frames[1].filename(), "b.png");
}

TEST(FieldIo, BinaryRoundTripIsFloatExact) {
  std::mt19937_64 rng(5);
  const Image field = testing::random_image(3, 4, rng);
  Image f(3, 4, 1);
  for (std::size_t i = 0; i < f.size(); ++i) f.data()[i] = static_cast<float>(field.data()[i]);
  const std::string bytes = encode_smf(f);
  EXPECT_EQ(bytes.size(), 16u + 4u * 12u);
  EXPECT_EQ(bytes.substr(0, 4), "SMF1");
  EXPECT_EQ(decode_smf(bytes), f);
}

TEST(FieldIo, TextRoundTripIsExact) {
  std::mt19937_64 rng(6);
  const Image field = testing::random_image(2, 3, rng);
  Image two(2, 3, 2);
  for (std::size_t i = 0; i < two.size(); ++i) two.data()[i] = field.data()[i / 2] * (i % 2 ? -1 : 1);
  EXPECT_EQ(decode_smf_text(encode_smf_text(two)), two);
}

TEST(FieldIo, MalformedInputThrows) {
  EXPECT_THROW(decode_smf("SMF2"), Error);
  std::string bytes = encode_smf(Image(2, 2, 1, 0.25));
  EXPECT_THROW(decode_smf(bytes.substr(0, bytes.size() - 1)), Error);
  EXPECT_THROW(decode_smf(bytes + "x"), Error);
  EXPECT_THROW(decode_smf_text("SMF1T 2 2 1\n1 2\n3\n"), Error);
}

TEST(FieldIo, FlowAndHeatmapConversions) {
  const FlowField flow = FlowField::identity(make_grid(3, 4));
  EXPECT_EQ(flow_from_image(to_image(flow)), flow);
  const Heatmap h(make_grid(2, 2), {0.0, 1.0, 2.0, 3.0});
  const auto maps = heatmaps_from_image(to_image(h));
  ASSERT_EQ(maps.size(), 1u);
  EXPECT_DOUBLE_EQ(maps[0].at(1, 1), 3.0);
}

TEST(FieldIo, ReadFieldDispatchesOnMagic) {
  TempDir dir("field");
  const Image f(2, 2, 2, 0.5);
  write_smf(dir.path() / "f.smf", f);
  std::ofstream(dir.path() / "f.smft") << encode_smf_text(f);
  EXPECT_EQ(read_field(dir.path() / "f.smf"), f);
  EXPECT_EQ(read_field(dir.path() / "f.smft"), f);
}

}  // namespace
}  // namespace smf
