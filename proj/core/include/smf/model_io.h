#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smf/forest.h"
#include "smf/svm.h"

namespace smf {

enum class ModelKind { kForest, kSvm };

std::string_view to_string(ModelKind kind);
/// Accepts "rf"/"forest" and "svm".
ModelKind parse_model_kind(std::string_view text);

/// Default decision thresholds: the forest compares its real probability,
/// the SVM its signed fake score.
inline constexpr double kForestThreshold = 0.5;
inline constexpr double kSvmThreshold = 0.0;

double default_threshold(ModelKind kind);

/// A trained frame classifier plus the threshold it decides with.
struct DetectorModel {
  std::variant<ForestModel, SvmModel> model;
  double threshold = kForestThreshold;
  std::string metadata;  // free-form JSON object, echoed into the file

  ModelKind kind() const noexcept {
    return std::holds_alternative<ForestModel>(model) ? ModelKind::kForest : ModelKind::kSvm;
  }
  bool operator==(const DetectorModel&) const = default;
};

/// Forest: real iff real probability > threshold.
/// SVM: fake iff score >= threshold, so a score on the threshold is fake.
Label classify_frame(const ForestModel& model, const FrameFeatures& f,
                     double threshold = kForestThreshold);
Label classify_frame(const SvmModel& model, const FrameFeatures& f,
                     double threshold = kSvmThreshold);
Label classify_frame(const DetectorModel& model, const FrameFeatures& f);

/// Real iff strictly more than half of the labels are real. Throws on empty.
Label majority_vote(const std::vector<Label>& frame_labels);

Label classify_video(const DetectorModel& model, const std::vector<FrameFeatures>& frames);

/// "SMDL1" container: magic, u32 version, u8 kind, f64 threshold,
/// u32 length + metadata JSON, then the model payload. Little-endian.
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::string encode_model(const DetectorModel& model);
DetectorModel decode_model(std::string_view bytes);
void save_model(const std::filesystem::path& path, const DetectorModel& model);
DetectorModel load_model(const std::filesystem::path& path);

}  // namespace smf
