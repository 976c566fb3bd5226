#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smf {

enum class ErrorCode {
  kInvalidArgument,
  kShapeMismatch,
  kDegenerate,
  kRankDeficient,
  kSingular,
  kIo,
  kParse,
  kDuplicateId,
  kDanglingReference,
  kValidation,
  kInfeasible,
  kAmbiguous,
  kNoMatch,
};

/// Stable identifier used in machine-readable error output.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace smf
