#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace smf {

enum class Label { kReal, kFake };
enum class Gender { kFemale, kMale, kUnspecified };

std::string_view to_string(Label label);
std::string_view to_string(Gender gender);
Label parse_label(std::string_view text);
Gender parse_gender(std::string_view text);

inline constexpr int kManifestSchemaVersion = 1;

/// One row of the dataset index.
struct VideoRecord {
  std::string video_id;
  Label label = Label::kReal;
  std::string subject_id;  // apparent identity
  std::optional<std::string> source_subject_id;  // identity donor, fakes only
  std::optional<std::string> driving_video_id;   // fakes only
  Gender gender = Gender::kUnspecified;
  double duration_s = 0.0;
  std::string frames_path;
  std::optional<std::string> transcript;
  bool unseen_subject = false;
  std::optional<std::string> appearance_group;

  bool operator==(const VideoRecord&) const = default;
};

/// Validated collection: unique ids, fakes carry a driving video that
/// resolves to a real record, reals carry none, durations positive.
class Manifest {
 public:
  Manifest() = default;
  /// Validates; throws kDuplicateId, kDanglingReference or kValidation.
  explicit Manifest(std::vector<VideoRecord> records,
                    int schema_version = kManifestSchemaVersion);

  const std::vector<VideoRecord>& records() const noexcept { return records_; }
  int schema_version() const noexcept { return schema_version_; }
  std::size_t size() const noexcept { return records_.size(); }

  const VideoRecord* find(std::string_view video_id) const;

  /// Directory relative frames_path values are resolved against.
  const std::filesystem::path& base_dir() const noexcept { return base_dir_; }
  void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }
  std::filesystem::path frames_dir(const VideoRecord& rec) const;

  bool operator==(const Manifest& other) const {
    return schema_version_ == other.schema_version_ && records_ == other.records_;
  }

 private:
  std::vector<VideoRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
  int schema_version_ = kManifestSchemaVersion;
  std::filesystem::path base_dir_;
};

/// JSON-lines: an optional {"schema_version": N} header line, then one
/// record object per line. Errors carry the 1-based line number.
Manifest parse_manifest(std::istream& in, std::string_view source_name = "<input>");
Manifest load_manifest(const std::filesystem::path& path);

void write_manifest(std::ostream& out, const Manifest& manifest);
void save_manifest(const std::filesystem::path& path, const Manifest& manifest);

enum class TransferType {
  kSamePersonDifferentAppearance = 1,
  kDifferentPersonSimilarAppearance = 2,
  kDifferentPersonDifferentAppearance = 3,
};

std::string_view to_string(TransferType type);

/// Compares the fake's apparent subject and appearance group against the
/// driving record's. Throws for real records and for same-subject,
/// same-appearance pairs (not a transfer).
TransferType classify_transfer_type(const VideoRecord& rec, const Manifest& manifest);

}  // namespace smf
