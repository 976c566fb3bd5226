#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smf {

/// Pixel grid. Coordinates are (row, col); pixel centers sit at integer
/// coordinates with the origin at the center of pixel (0, 0).
struct Grid2D {
  int height = 0;
  int width = 0;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  bool operator==(const Grid2D&) const = default;
};

/// Validates height >= 1 and width >= 1.
Grid2D make_grid(int height, int width);

struct Vec2 {
  double row = 0.0;
  double col = 0.0;

  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.row + b.row, a.col + b.col}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.row - b.row, a.col - b.col}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.row, s * v.col}; }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 diag(double x, double y) { return {x, 0.0, 0.0, y}; }

  double det() const { return a * d - b * c; }
  Mat2 transpose() const { return {a, c, b, d}; }
  bool operator==(const Mat2&) const = default;
};

inline Mat2 operator*(const Mat2& m, const Mat2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
          m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}
inline Vec2 operator*(const Mat2& m, Vec2 v) {
  return {m.a * v.row + m.b * v.col, m.c * v.row + m.d * v.col};
}
inline Mat2 operator*(double s, const Mat2& m) {
  return {s * m.a, s * m.b, s * m.c, s * m.d};
}

/// Throws kSingular when the determinant is zero or not finite.
Mat2 inverse(const Mat2& m);

/// Ratio of largest to smallest singular value; infinity when singular.
double condition_number(const Mat2& m);

/// H x W x C array of doubles, channel-interleaved row-major storage.
/// Pixel values are expected in [0, 1] but the container does not enforce it;
/// validate_unit_range() does.
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels = 1, double fill = 0.0);
  Image(Grid2D grid, int channels = 1, double fill = 0.0)
      : Image(grid.height, grid.width, channels, fill) {}

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  Grid2D grid() const noexcept { return {height_, width_}; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& at(int r, int c, int ch = 0) noexcept {
    return data_[index(r, c, ch)];
  }
  double at(int r, int c, int ch = 0) const noexcept {
    return data_[index(r, c, ch)];
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }
  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int r, int c, int ch) const noexcept {
    return (static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(c)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(ch);
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Throws kInvalidArgument unless every value is finite and in [0, 1].
void validate_unit_range(const Image& img, const char* what);

/// Throws kInvalidArgument if any value is NaN or infinite.
void validate_finite(const Image& img, const char* what);

/// Rec. 601 luma for 3-channel input; single-channel input is returned as is.
Image to_grayscale(const Image& img);

}  // namespace smf
