#include "smf/model_io.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>

#include "smf/error.h"

namespace smf {
namespace {

constexpr std::string_view kMagic = "SMDL1";

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::string_view s) { out_.append(s); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::string_view take(std::size_t n) {
    if (in_.size() - pos_ < n) throw Error(ErrorCode::kParse, "truncated SMDL1 model");
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::uint64_t le(std::size_t n) {
    auto s = take(n);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[i])) << (8 * i);
    }
    return v;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

void encode_payload(Writer& w, const ForestModel& m) {
  w.u32(static_cast<std::uint32_t>(m.trees.size()));
  for (const auto& tree : m.trees) {
    w.u32(static_cast<std::uint32_t>(tree.nodes.size()));
    for (const auto& n : tree.nodes) {
      w.i32(n.feature);
      w.f64(n.threshold);
      w.i32(n.left);
      w.i32(n.right);
      w.f64(n.real_fraction);
    }
  }
}

void encode_payload(Writer& w, const SvmModel& m) {
  w.u32(static_cast<std::uint32_t>(m.weights.size()));
  for (double v : m.weights) w.f64(v);
  w.f64(m.bias);
  for (double v : m.mean) w.f64(v);
  for (double v : m.scale) w.f64(v);
}

void check_count(const Reader& r, std::size_t count, std::size_t item_bytes) {
  if (count > r.remaining() / item_bytes) {
    throw Error(ErrorCode::kParse, "SMDL1 count exceeds payload size");
  }
}

ForestModel decode_forest(Reader& r) {
  ForestModel m;
  const std::uint32_t n_trees = r.u32();
  check_count(r, n_trees, 4);
  m.trees.resize(n_trees);
  for (auto& tree : m.trees) {
    const std::uint32_t n_nodes = r.u32();
    check_count(r, n_nodes, 28);
    if (n_nodes == 0) throw Error(ErrorCode::kParse, "SMDL1 tree without nodes");
    tree.nodes.resize(n_nodes);
    for (std::uint32_t i = 0; i < n_nodes; ++i) {
      TreeNode& n = tree.nodes[i];
      n.feature = r.i32();
      n.threshold = r.f64();
      n.left = r.i32();
      n.right = r.i32();
      n.real_fraction = r.f64();
      if (n.is_leaf()) continue;
      // Children always follow their parent, which rules out cycles.
      const auto in_range = [&](std::int32_t c) {
        return c > static_cast<std::int32_t>(i) && c < static_cast<std::int32_t>(n_nodes);
      };
      if (n.feature >= kFeatureDim || !in_range(n.left) || !in_range(n.right)) {
        throw Error(ErrorCode::kParse, "SMDL1 tree node out of range");
      }
    }
  }
  return m;
}

SvmModel decode_svm(Reader& r) {
  SvmModel m;
  const std::uint32_t dim = r.u32();
  if (dim != static_cast<std::uint32_t>(kFeatureDim)) {
    throw Error(ErrorCode::kParse, "SMDL1 svm dimension mismatch");
  }
  m.weights.resize(dim);
  for (double& v : m.weights) v = r.f64();
  m.bias = r.f64();
  m.mean.resize(dim);
  for (double& v : m.mean) v = r.f64();
  m.scale.resize(dim);
  for (double& v : m.scale) v = r.f64();
  return m;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::kForest ? "rf" : "svm";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "rf" || text == "forest") return ModelKind::kForest;
  if (text == "svm") return ModelKind::kSvm;
  throw Error(ErrorCode::kInvalidArgument, "unknown model kind: " + std::string(text));
}

double default_threshold(ModelKind kind) {
  return kind == ModelKind::kForest ? kForestThreshold : kSvmThreshold;
}

Label classify_frame(const ForestModel& model, const FrameFeatures& f, double threshold) {
  return model.real_probability(f) > threshold ? Label::kReal : Label::kFake;
}

Label classify_frame(const SvmModel& model, const FrameFeatures& f, double threshold) {
  return model.score(f) >= threshold ? Label::kFake : Label::kReal;
}

Label classify_frame(const DetectorModel& model, const FrameFeatures& f) {
  return std::visit([&](const auto& m) { return classify_frame(m, f, model.threshold); },
                    model.model);
}

Label majority_vote(const std::vector<Label>& frame_labels) {
  if (frame_labels.empty()) throw Error(ErrorCode::kInvalidArgument, "no frame labels to vote on");
  std::size_t real = 0;
  for (Label l : frame_labels) real += l == Label::kReal;
  return 2 * real > frame_labels.size() ? Label::kReal : Label::kFake;
}

Label classify_video(const DetectorModel& model, const std::vector<FrameFeatures>& frames) {
  std::vector<Label> labels;
  labels.reserve(frames.size());
  for (const auto& f : frames) labels.push_back(classify_frame(model, f));
  return majority_vote(labels);
}

std::string encode_model(const DetectorModel& model) {
  Writer w;
  w.bytes(kMagic);
  w.u32(kModelFormatVersion);
  w.u8(model.kind() == ModelKind::kForest ? 0 : 1);
  w.f64(model.threshold);
  w.u32(static_cast<std::uint32_t>(model.metadata.size()));
  w.bytes(model.metadata);
  std::visit([&](const auto& m) { encode_payload(w, m); }, model.model);
  return w.take();
}

DetectorModel decode_model(std::string_view bytes) {
  Reader r(bytes);
  if (bytes.size() < kMagic.size() || r.take(kMagic.size()) != kMagic) {
    throw Error(ErrorCode::kParse, "not an SMDL1 model");
  }
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::kParse, "unsupported SMDL1 version " + std::to_string(version));
  }
  const std::uint8_t kind = r.u8();
  if (kind > 1) throw Error(ErrorCode::kParse, "unknown SMDL1 model kind");
  DetectorModel model;
  model.threshold = r.f64();
  if (!std::isfinite(model.threshold)) throw Error(ErrorCode::kParse, "non-finite threshold");
  const std::uint32_t meta_len = r.u32();
  model.metadata = std::string(r.take(meta_len));
  if (kind == 0) {
    model.model = decode_forest(r);
  } else {
    model.model = decode_svm(r);
  }
  if (!r.done()) throw Error(ErrorCode::kParse, "trailing bytes after SMDL1 payload");
  return model;
}

void save_model(const std::filesystem::path& path, const DetectorModel& model) {
  const std::string bytes = encode_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

DetectorModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return decode_model(bytes);
}

}  // namespace smf
