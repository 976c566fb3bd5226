#include "smf/image.h"

#include <cmath>
#include <limits>
#include <string>

#include "smf/error.h"

namespace smf {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kShapeMismatch: return "shape_mismatch";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kRankDeficient: return "rank_deficient";
    case ErrorCode::kSingular: return "singular";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kDuplicateId: return "duplicate_id";
    case ErrorCode::kDanglingReference: return "dangling_reference";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kAmbiguous: return "ambiguous";
    case ErrorCode::kNoMatch: return "no_match";
  }
  return "unknown";
}

Grid2D make_grid(int height, int width) {
  if (height < 1 || width < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid dimensions must be positive, got " +
                    std::to_string(height) + "x" + std::to_string(width));
  }
  return {height, width};
}

Mat2 inverse(const Mat2& m) {
  const double det = m.det();
  if (det == 0.0 || !std::isfinite(det)) {
    throw Error(ErrorCode::kSingular, "matrix is singular");
  }
  const double inv = 1.0 / det;
  return {m.d * inv, -m.b * inv, -m.c * inv, m.a * inv};
}

double condition_number(const Mat2& m) {
  // Singular values of a 2x2 from the eigenvalues of M^T M.
  const double p = m.a * m.a + m.c * m.c;
  const double q = m.a * m.b + m.c * m.d;
  const double s = m.b * m.b + m.d * m.d;
  const double mean = 0.5 * (p + s);
  const double disc = std::sqrt(0.25 * (p - s) * (p - s) + q * q);
  const double hi = mean + disc;
  // Product of eigenvalues is det^2; avoids cancellation in mean - disc.
  const double det = m.det();
  if (hi == 0.0 || det == 0.0) return std::numeric_limits<double>::infinity();
  const double lo = det * det / hi;
  return std::sqrt(hi / lo);
}

Image::Image(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 1 || width < 1 || channels < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "image dimensions must be positive, got " +
                    std::to_string(height) + "x" + std::to_string(width) +
                    "x" + std::to_string(channels));
  }
  data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

void validate_finite(const Image& img, const char* what) {
  for (double v : img.data()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " contains non-finite values");
    }
  }
}

void validate_unit_range(const Image& img, const char* what) {
  for (double v : img.data()) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " has values outside [0, 1]");
    }
  }
}

Image to_grayscale(const Image& img) {
  if (img.channels() == 1) return img;
  if (img.channels() != 3 && img.channels() != 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "to_grayscale expects 1, 3 or 4 channels");
  }
  Image out(img.height(), img.width(), 1);
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      out.at(r, c) = 0.299 * img.at(r, c, 0) + 0.587 * img.at(r, c, 1) +
                     0.114 * img.at(r, c, 2);
    }
  }
  return out;
}

}  // namespace smf
