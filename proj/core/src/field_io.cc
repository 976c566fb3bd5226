#include "smf/field_io.h"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "smf/error.h"

namespace smf {
namespace {

constexpr char kMagic[4] = {'S', 'M', 'F', '1'};
constexpr std::string_view kTextMagic = "SMF1T";
constexpr std::size_t kHeaderSize = 16;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(std::string_view in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + i]))
         << (8 * i);
  }
  return v;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

}  // namespace

std::string encode_smf(const Image& field) {
  std::string out(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(field.height()));
  put_u32(out, static_cast<std::uint32_t>(field.width()));
  put_u32(out, static_cast<std::uint32_t>(field.channels()));
  out.reserve(kHeaderSize + 4 * field.size());
  for (double v : field.data()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

Image decode_smf(std::string_view bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kParse, "not an SMF1 container");
  }
  const std::uint32_t h = get_u32(bytes, 4);
  const std::uint32_t w = get_u32(bytes, 8);
  const std::uint32_t c = get_u32(bytes, 12);
  if (h == 0 || w == 0 || c == 0 || h > (1u << 20) || w > (1u << 20) || c > 4096) {
    throw Error(ErrorCode::kParse, "SMF1 header has invalid dimensions");
  }
  const std::size_t n = std::size_t{h} * w * c;
  if (bytes.size() != kHeaderSize + 4 * n) {
    throw Error(ErrorCode::kParse, "SMF1 payload size does not match header");
  }
  Image img(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c));
  auto data = img.data();
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = std::bit_cast<float>(get_u32(bytes, kHeaderSize + 4 * i));
  }
  return img;
}

void write_smf(const std::filesystem::path& path, const Image& field) {
  dump(path, encode_smf(field));
}

Image read_smf(const std::filesystem::path& path) { return decode_smf(slurp(path)); }

std::string encode_smf_text(const Image& field) {
  std::string out = std::string(kTextMagic) + " " + std::to_string(field.height()) +
                    " " + std::to_string(field.width()) + " " +
                    std::to_string(field.channels()) + "\n";
  char buf[32];
  for (int r = 0; r < field.height(); ++r) {
    for (int c = 0; c < field.width(); ++c) {
      for (int ch = 0; ch < field.channels(); ++ch) {
        std::snprintf(buf, sizeof(buf), "%.17g", field.at(r, c, ch));
        if (c > 0 || ch > 0) out.push_back(' ');
        out += buf;
      }
    }
    out.push_back('\n');
  }
  return out;
}

Image decode_smf_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string magic;
  int h = 0, w = 0, c = 0;
  if (!(in >> magic >> h >> w >> c) || magic != kTextMagic || h < 1 || w < 1 ||
      c < 1) {
    throw Error(ErrorCode::kParse, "not an SMF1T text field");
  }
  Image img(h, w, c);
  for (double& v : img.data()) {
    if (!(in >> v)) throw Error(ErrorCode::kParse, "SMF1T payload truncated");
  }
  std::string extra;
  if (in >> extra) throw Error(ErrorCode::kParse, "SMF1T payload has trailing values");
  return img;
}

Image read_field(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  if (bytes.rfind(kTextMagic, 0) == 0) return decode_smf_text(bytes);
  return decode_smf(bytes);
}

Image to_image(const Heatmap& h) {
  Image img(h.grid(), 1);
  std::copy(h.values().begin(), h.values().end(), img.data().begin());
  return img;
}

Image to_image(const FlowField& flow) {
  Image img(flow.grid(), 2);
  auto data = img.data();
  std::size_t i = 0;
  for (const Vec2& v : flow.map()) {
    data[i++] = v.row;
    data[i++] = v.col;
  }
  return img;
}

Image to_image(const ConfidenceMap& conf) {
  Image img(conf.grid(), 1);
  std::copy(conf.values().begin(), conf.values().end(), img.data().begin());
  return img;
}

Image to_image(const RegionSet& set) {
  const Grid2D g = set.grid();
  const int k = static_cast<int>(set.k());
  Image img(g, k + 1);
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      for (int j = 0; j < k; ++j) img.at(r, c, j) = set.regions[j].at(r, c);
      img.at(r, c, k) = set.background.at(r, c);
    }
  }
  return img;
}

std::vector<Heatmap> heatmaps_from_image(const Image& stack) {
  std::vector<Heatmap> maps;
  maps.reserve(static_cast<std::size_t>(stack.channels()));
  for (int ch = 0; ch < stack.channels(); ++ch) {
    std::vector<double> values;
    values.reserve(stack.grid().size());
    for (int r = 0; r < stack.height(); ++r) {
      for (int c = 0; c < stack.width(); ++c) values.push_back(stack.at(r, c, ch));
    }
    maps.emplace_back(stack.grid(), std::move(values));
  }
  return maps;
}

FlowField flow_from_image(const Image& field) {
  if (field.channels() != 2) {
    throw Error(ErrorCode::kShapeMismatch, "flow field needs exactly 2 channels");
  }
  std::vector<Vec2> map;
  map.reserve(field.grid().size());
  for (int r = 0; r < field.height(); ++r) {
    for (int c = 0; c < field.width(); ++c) {
      map.push_back({field.at(r, c, 0), field.at(r, c, 1)});
    }
  }
  return FlowField(field.grid(), std::move(map));
}

ConfidenceMap confidence_from_image(const Image& field) {
  if (field.channels() != 1) {
    throw Error(ErrorCode::kShapeMismatch, "confidence map needs exactly 1 channel");
  }
  return ConfidenceMap(field.grid(),
                       std::vector<double>(field.data().begin(), field.data().end()));
}

RegionSet region_set_from_image(const Image& stack) {
  if (stack.channels() < 2) {
    throw Error(ErrorCode::kShapeMismatch,
                "region set needs at least one region plus a background channel");
  }
  auto maps = heatmaps_from_image(stack);
  RegionSet set;
  set.background = std::move(maps.back());
  maps.pop_back();
  set.regions = std::move(maps);
  return set;
}

}  // namespace smf
