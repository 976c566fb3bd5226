#include <sstream>

#include <gtest/gtest.h>

#include "smf/error.h"
#include "smf/manifest.h"

namespace smf {
namespace {

constexpr const char* kReal = R"({"video_id":"r1","label":"real","subject_id":"a","gender":"female","duration_s":8.5,"frames_path":"frames/r1","appearance_group":"g1"})";
constexpr const char* kFake1 = R"({"video_id":"f1","label":"fake","subject_id":"a","source_subject_id":"a","driving_video_id":"r1","gender":"female","duration_s":9.0,"frames_path":"frames/f1","appearance_group":"g2","transcript":"hello"})";
constexpr const char* kFake2 = R"({"video_id":"f2","label":"fake","subject_id":"b","source_subject_id":"b","driving_video_id":"r1","gender":"male","duration_s":7.0,"unseen_subject":true,"appearance_group":"g1"})";

Manifest parse(const std::string& text) {
  std::istringstream in(text);
  return parse_manifest(in, "m.jsonl");
}

Error error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error";
  return Error(ErrorCode::kInvalidArgument, "");
}

TEST(Manifest, LoadsThreeRecords) {
  const Manifest m = parse(std::string(kReal) + "\n" + kFake1 + "\n\n" + kFake2 + "\n");
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.find("f2")->gender, Gender::kMale);
  EXPECT_TRUE(m.find("f2")->unseen_subject);
  EXPECT_EQ(*m.find("f1")->transcript, "hello");
  EXPECT_EQ(m.find("nope"), nullptr);
}

TEST(Manifest, DuplicateIdNamesBothLines) {
  const Error e = error_of(std::string(kReal) + "\n" + kFake1 + "\n" + kReal + "\n");
  EXPECT_EQ(e.code(), ErrorCode::kDuplicateId);
  const std::string msg = e.what();
  EXPECT_NE(msg.find("'r1'"), std::string::npos);
  EXPECT_NE(msg.find("lines 1 and 3"), std::string::npos);
}

TEST(Manifest, FakeWithoutDrivingVideo) {
  const Error e = error_of(std::string(kReal) + "\n" +
                           R"({"video_id":"f","label":"fake","subject_id":"a","duration_s":1})" + "\n");
  EXPECT_EQ(e.code(), ErrorCode::kValidation);
  EXPECT_NE(std::string(e.what()).find("m.jsonl:2"), std::string::npos);
}

TEST(Manifest, DanglingDrivingVideo) {
  EXPECT_EQ(error_of(std::string(kFake1) + "\n").code(), ErrorCode::kDanglingReference);
  // A driving video must be a real record.
  const std::string chained = std::string(kReal) + "\n" + kFake1 + "\n" +
      R"({"video_id":"f3","label":"fake","subject_id":"c","driving_video_id":"f1","duration_s":1})";
  EXPECT_EQ(error_of(chained).code(), ErrorCode::kDanglingReference);
}

TEST(Manifest, OtherValidationErrors) {
  EXPECT_EQ(error_of(R"({"video_id":"r","label":"real","subject_id":"a","duration_s":0})").code(),
            ErrorCode::kValidation);
  EXPECT_EQ(error_of(R"({"video_id":"r","label":"maybe","subject_id":"a","duration_s":1})").code(),
            ErrorCode::kValidation);
  EXPECT_EQ(error_of("{not json").code(), ErrorCode::kParse);
  EXPECT_EQ(error_of(R"({"schema_version":2})").code(), ErrorCode::kValidation);
}

TEST(Manifest, RoundTrip) {
  const Manifest m = parse(std::string(R"({"schema_version":1})") + "\n" + kReal + "\n" + kFake1 + "\n" + kFake2);
  std::stringstream out;
  write_manifest(out, m);
  EXPECT_EQ(parse(out.str()), m);
}

TEST(Manifest, ConstructorValidates) {
  VideoRecord r;
  r.video_id = "x";
  r.subject_id = "s";
  r.duration_s = 1.0;
  EXPECT_THROW(Manifest({r, r}), Error);
  r.driving_video_id = "y";
  EXPECT_THROW(Manifest({r}), Error);
}

TEST(TransferType, ThreeKinds) {
  const std::string base = std::string(kReal) + "\n";
  const Manifest m = parse(base + kFake1 + "\n" + kFake2 + "\n" +
      R"({"video_id":"f4","label":"fake","subject_id":"c","driving_video_id":"r1","duration_s":1,"appearance_group":"g9"})");
  EXPECT_EQ(classify_transfer_type(*m.find("f1"), m), TransferType::kSamePersonDifferentAppearance);
  EXPECT_EQ(classify_transfer_type(*m.find("f2"), m), TransferType::kDifferentPersonSimilarAppearance);
  EXPECT_EQ(classify_transfer_type(*m.find("f4"), m), TransferType::kDifferentPersonDifferentAppearance);
  EXPECT_EQ(to_string(TransferType::kDifferentPersonDifferentAppearance), "diff_person_diff_appearance");
}

TEST(TransferType, RejectsRealAndNonTransfers) {
  const Manifest m = parse(std::string(kReal) + "\n" +
      R"({"video_id":"f","label":"fake","subject_id":"a","driving_video_id":"r1","duration_s":1,"appearance_group":"g1"})");
  EXPECT_THROW(classify_transfer_type(*m.find("r1"), m), Error);
  EXPECT_THROW(classify_transfer_type(*m.find("f"), m), Error);
}

TEST(Manifest, LabelAndGenderNames) {
  EXPECT_EQ(parse_gender("F"), Gender::kFemale);
  EXPECT_EQ(parse_gender(""), Gender::kUnspecified);
  EXPECT_EQ(to_string(Label::kFake), "fake");
  EXPECT_THROW(parse_label("FAKE?"), Error);
}

}  // namespace
}  // namespace smf
