#include "smf/manifest.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "smf/error.h"

namespace smf {
namespace {

using nlohmann::json;

struct Located {
  VideoRecord record;
  int line;
};

std::optional<std::string> optional_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

VideoRecord record_from_json(const json& j) {
  VideoRecord r;
  r.video_id = j.at("video_id").get<std::string>();
  r.label = parse_label(j.at("label").get<std::string>());
  r.subject_id = j.at("subject_id").get<std::string>();
  r.source_subject_id = optional_string(j, "source_subject_id");
  r.driving_video_id = optional_string(j, "driving_video_id");
  r.gender = j.contains("gender") && !j.at("gender").is_null()
                 ? parse_gender(j.at("gender").get<std::string>())
                 : Gender::kUnspecified;
  r.duration_s = j.at("duration_s").get<double>();
  r.frames_path = j.value("frames_path", std::string());
  r.transcript = optional_string(j, "transcript");
  r.unseen_subject = j.value("unseen_subject", false);
  r.appearance_group = optional_string(j, "appearance_group");
  return r;
}

json record_to_json(const VideoRecord& r) {
  json j;
  j["video_id"] = r.video_id;
  j["label"] = std::string(to_string(r.label));
  j["subject_id"] = r.subject_id;
  if (r.source_subject_id) j["source_subject_id"] = *r.source_subject_id;
  if (r.driving_video_id) j["driving_video_id"] = *r.driving_video_id;
  j["gender"] = std::string(to_string(r.gender));
  j["duration_s"] = r.duration_s;
  j["frames_path"] = r.frames_path;
  if (r.transcript) j["transcript"] = *r.transcript;
  j["unseen_subject"] = r.unseen_subject;
  if (r.appearance_group) j["appearance_group"] = *r.appearance_group;
  return j;
}

std::string where(std::string_view source, int line) {
  return std::string(source) + ":" + std::to_string(line);
}

// Shared by the constructor (no line info) and the parser (line-numbered).
std::unordered_map<std::string, std::size_t> validate(const std::vector<Located>& rows,
                                                      std::string_view source) {
  auto loc = [&](const Located& row) {
    return row.line > 0 ? where(source, row.line) + ": " : std::string();
  };
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const VideoRecord& r = rows[i].record;
    if (r.video_id.empty()) {
      throw Error(ErrorCode::kValidation, loc(rows[i]) + "video_id is empty");
    }
    const auto [it, inserted] = index.emplace(r.video_id, i);
    if (!inserted) {
      const Located& first = rows[it->second];
      std::string msg = "duplicate video_id '" + r.video_id + "'";
      if (rows[i].line > 0) {
        msg += " on lines " + std::to_string(first.line) + " and " +
               std::to_string(rows[i].line) + " of " + std::string(source);
      }
      throw Error(ErrorCode::kDuplicateId, msg);
    }
    if (!(r.duration_s > 0.0) || !std::isfinite(r.duration_s)) {
      throw Error(ErrorCode::kValidation,
                  loc(rows[i]) + "video '" + r.video_id + "' has non-positive duration");
    }
    if (r.label == Label::kFake && !r.driving_video_id) {
      throw Error(ErrorCode::kValidation,
                  loc(rows[i]) + "fake video '" + r.video_id + "' lacks driving_video_id");
    }
    if (r.label == Label::kReal && r.driving_video_id) {
      throw Error(ErrorCode::kValidation,
                  loc(rows[i]) + "real video '" + r.video_id + "' has a driving_video_id");
    }
  }
  for (const Located& row : rows) {
    const VideoRecord& r = row.record;
    if (!r.driving_video_id) continue;
    const auto it = index.find(*r.driving_video_id);
    if (it == index.end()) {
      throw Error(ErrorCode::kDanglingReference,
                  loc(row) + "video '" + r.video_id + "' references unknown driving video '" +
                      *r.driving_video_id + "'");
    }
    if (rows[it->second].record.label != Label::kReal) {
      throw Error(ErrorCode::kDanglingReference,
                  loc(row) + "video '" + r.video_id + "' references driving video '" +
                      *r.driving_video_id + "' which is not a real record");
    }
  }
  return index;
}

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::kReal ? "real" : "fake";
}

std::string_view to_string(Gender gender) {
  switch (gender) {
    case Gender::kFemale: return "female";
    case Gender::kMale: return "male";
    case Gender::kUnspecified: return "unspecified";
  }
  return "unspecified";
}

Label parse_label(std::string_view text) {
  if (text == "real") return Label::kReal;
  if (text == "fake") return Label::kFake;
  throw Error(ErrorCode::kValidation, "unknown label '" + std::string(text) + "'");
}

Gender parse_gender(std::string_view text) {
  if (text == "female" || text == "f" || text == "F") return Gender::kFemale;
  if (text == "male" || text == "m" || text == "M") return Gender::kMale;
  if (text.empty() || text == "unspecified") return Gender::kUnspecified;
  throw Error(ErrorCode::kValidation, "unknown gender '" + std::string(text) + "'");
}

std::string_view to_string(TransferType type) {
  switch (type) {
    case TransferType::kSamePersonDifferentAppearance:
      return "same_person_diff_appearance";
    case TransferType::kDifferentPersonSimilarAppearance:
      return "diff_person_similar_appearance";
    case TransferType::kDifferentPersonDifferentAppearance:
      return "diff_person_diff_appearance";
  }
  return "unknown";
}

Manifest::Manifest(std::vector<VideoRecord> records, int schema_version)
    : schema_version_(schema_version) {
  std::vector<Located> rows;
  rows.reserve(records.size());
  for (auto& r : records) rows.push_back({std::move(r), 0});
  index_ = validate(rows, "<manifest>");
  records_.reserve(rows.size());
  for (auto& row : rows) records_.push_back(std::move(row.record));
}

const VideoRecord* Manifest::find(std::string_view video_id) const {
  const auto it = index_.find(std::string(video_id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

std::filesystem::path Manifest::frames_dir(const VideoRecord& rec) const {
  const std::filesystem::path p(rec.frames_path);
  if (p.is_absolute() || base_dir_.empty()) return p;
  return base_dir_ / p;
}

Manifest parse_manifest(std::istream& in, std::string_view source_name) {
  std::vector<Located> rows;
  int schema_version = kManifestSchemaVersion;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      if (!j.is_object()) {
        throw Error(ErrorCode::kParse, where(source_name, line_no) + ": expected an object");
      }
      if (j.contains("schema_version") && !j.contains("video_id")) {
        schema_version = j.at("schema_version").get<int>();
        if (schema_version != kManifestSchemaVersion) {
          throw Error(ErrorCode::kValidation,
                      where(source_name, line_no) + ": unsupported schema_version " +
                          std::to_string(schema_version));
        }
        continue;
      }
      rows.push_back({record_from_json(j), line_no});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, where(source_name, line_no) + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kValidation &&
          std::string_view(e.what()).find(std::string(source_name) + ":") != 0) {
        throw Error(ErrorCode::kValidation,
                    where(source_name, line_no) + ": " + e.what());
      }
      throw;
    }
  }
  validate(rows, source_name);  // line-numbered diagnostics
  std::vector<VideoRecord> records;
  records.reserve(rows.size());
  for (auto& row : rows) records.push_back(std::move(row.record));
  return Manifest(std::move(records), schema_version);
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  Manifest m = parse_manifest(in, path.string());
  m.set_base_dir(path.parent_path());
  return m;
}

void write_manifest(std::ostream& out, const Manifest& manifest) {
  out << json{{"schema_version", manifest.schema_version()}}.dump() << '\n';
  for (const auto& r : manifest.records()) out << record_to_json(r).dump() << '\n';
}

void save_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  write_manifest(out, manifest);
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

TransferType classify_transfer_type(const VideoRecord& rec, const Manifest& manifest) {
  if (rec.label != Label::kFake || !rec.driving_video_id) {
    throw Error(ErrorCode::kInvalidArgument,
                "transfer type is only defined for fake records ('" + rec.video_id + "')");
  }
  const VideoRecord* driving = manifest.find(*rec.driving_video_id);
  if (!driving) {
    throw Error(ErrorCode::kDanglingReference,
                "driving video '" + *rec.driving_video_id + "' not in manifest");
  }
  if (!rec.appearance_group || !driving->appearance_group) {
    throw Error(ErrorCode::kValidation,
                "appearance_group missing on '" + rec.video_id + "' or its driving video");
  }
  const bool same_person = rec.subject_id == driving->subject_id;
  const bool same_look = *rec.appearance_group == *driving->appearance_group;
  if (same_person && !same_look) return TransferType::kSamePersonDifferentAppearance;
  if (!same_person && same_look) return TransferType::kDifferentPersonSimilarAppearance;
  if (!same_person && !same_look) return TransferType::kDifferentPersonDifferentAppearance;
  throw Error(ErrorCode::kValidation,
              "'" + rec.video_id + "' has the driving video's subject and appearance");
}

}  // namespace smf
