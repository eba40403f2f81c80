#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace door {

enum class ErrorCode {
  ConfigInvalid,
  InvalidImage,
  InvalidBox,
  NoFaceFound,
  RoleExpiryMismatch,
  UnknownGroup,
  UnknownPerson,
  PersonWithoutFace,
  NotTrained,
  DegenerateDescriptor,
  StoreCorrupt,
  FaceIdExpired,
  Unauthorized,
  BadRequest,
  CaptureFailed,
  RecognitionUnavailable,
  ScenarioError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the door libraries carries one of the codes above.
// `detail` holds the offending field or resource when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string detail = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace door
