#include "smf/image_io.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "smf/error.h"

namespace smf {
namespace {

namespace fs = std::filesystem;

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return ext;
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return f;
}

Image read_png(const fs::path& path) {
  FilePtr file = open_file(path, "rb");
  png_byte header[8];
  if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8)) {
    throw Error(ErrorCode::kParse, path.string() + " is not a PNG file");
  }
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::kIo, "libpng initialisation failed");
  }
  std::vector<png_bytep> rows;
  std::vector<png_byte> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::kParse, "corrupt PNG " + path.string());
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (depth == 16) png_set_swap(png);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int in_channels = png_get_channels(png, info);
  const int out_depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  buffer.resize(rowbytes * static_cast<std::size_t>(height));
  rows.resize(static_cast<std::size_t>(height));
  for (int r = 0; r < height; ++r) {
    rows[static_cast<std::size_t>(r)] = buffer.data() + rowbytes * r;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const int channels = (in_channels >= 3) ? 3 : 1;
  const double scale = (out_depth == 16) ? 65535.0 : 255.0;
  Image img(height, width, channels);
  for (int r = 0; r < height; ++r) {
    const png_byte* row = rows[static_cast<std::size_t>(r)];
    for (int c = 0; c < width; ++c) {
      for (int ch = 0; ch < channels; ++ch) {
        const std::size_t k = static_cast<std::size_t>(c) * in_channels + ch;
        double v;
        if (out_depth == 16) {
          const auto* p16 = reinterpret_cast<const std::uint16_t*>(row);
          v = p16[k];
        } else {
          v = row[k];
        }
        img.at(r, c, ch) = v / scale;
      }
    }
  }
  return img;
}

void write_png(const fs::path& path, const Image& img) {
  if (img.channels() != 1 && img.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "PNG output needs 1 or 3 channels");
  }
  FilePtr file = open_file(path, "wb");
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "libpng initialisation failed");
  }
  std::vector<png_byte> row(static_cast<std::size_t>(img.width()) * img.channels());
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()),
               static_cast<png_uint_32>(img.height()), 8,
               img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      for (int ch = 0; ch < img.channels(); ++ch) {
        const double v = std::clamp(img.at(r, c, ch), 0.0, 1.0);
        row[static_cast<std::size_t>(c) * img.channels() + ch] =
            static_cast<png_byte>(std::lround(v * 255.0));
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// Netpbm header tokens, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  char ch;
  while (in.get(ch)) {
    if (ch == '#') {
      std::string discard;
      std::getline(in, discard);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(ch);
  }
  return token;
}

Image read_netpbm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::string magic = next_token(in);
  if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6") {
    throw Error(ErrorCode::kParse,
                path.string() + ": unsupported netpbm type '" + magic + "'");
  }
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_token(in));
    height = std::stoi(next_token(in));
    maxval = std::stoi(next_token(in));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, path.string() + ": malformed header");
  }
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
    throw Error(ErrorCode::kParse, path.string() + ": invalid header values");
  }
  const int channels = (magic == "P3" || magic == "P6") ? 3 : 1;
  const bool binary = (magic == "P5" || magic == "P6");
  Image img(height, width, channels);
  const std::size_t count = img.size();
  auto data = img.data();
  if (binary) {
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(count * bytes);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
      throw Error(ErrorCode::kParse, path.string() + ": truncated pixel data");
    }
    for (std::size_t i = 0; i < count; ++i) {
      const unsigned v = bytes == 2 ? (raw[2 * i] << 8u) | raw[2 * i + 1] : raw[i];
      data[i] = static_cast<double>(v) / maxval;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::string tok = next_token(in);
      if (tok.empty()) {
        throw Error(ErrorCode::kParse, path.string() + ": truncated pixel data");
      }
      data[i] = std::stod(tok) / maxval;
    }
  }
  return img;
}

void write_netpbm(const fs::path& path, const Image& img, bool color) {
  if (img.channels() != (color ? 3 : 1)) {
    throw Error(ErrorCode::kInvalidArgument,
                color ? "PPM output needs 3 channels" : "PGM output needs 1 channel");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  out << (color ? "P6" : "P5") << '\n'
      << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<unsigned char> raw(img.size());
  auto data = img.data();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = static_cast<unsigned char>(
        std::lround(std::clamp(data[i], 0.0, 1.0) * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

bool is_image_extension(const std::string& ext) {
  return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

}  // namespace

Image read_image(const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_netpbm(path);
  throw Error(ErrorCode::kInvalidArgument,
              "unsupported image extension: " + path.string());
}

void write_image(const fs::path& path, const Image& img) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return write_png(path, img);
  if (ext == ".pgm") return write_netpbm(path, img, false);
  if (ext == ".ppm") return write_netpbm(path, img, true);
  throw Error(ErrorCode::kInvalidArgument,
              "unsupported image extension: " + path.string());
}

std::vector<fs::path> list_frames(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  }
  std::vector<fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() &&
        is_image_extension(lower_extension(entry.path()))) {
      frames.push_back(entry.path());
    }
  }
  std::sort(frames.begin(), frames.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });
  return frames;
}

}  // namespace smf
