#include "door/core/error.hpp"

namespace door {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::InvalidImage: return "InvalidImage";
    case ErrorCode::InvalidBox: return "InvalidBox";
    case ErrorCode::NoFaceFound: return "NoFaceFound";
    case ErrorCode::RoleExpiryMismatch: return "RoleExpiryMismatch";
    case ErrorCode::UnknownGroup: return "UnknownGroup";
    case ErrorCode::UnknownPerson: return "UnknownPerson";
    case ErrorCode::PersonWithoutFace: return "PersonWithoutFace";
    case ErrorCode::NotTrained: return "NotTrained";
    case ErrorCode::DegenerateDescriptor: return "DegenerateDescriptor";
    case ErrorCode::StoreCorrupt: return "StoreCorrupt";
    case ErrorCode::FaceIdExpired: return "FaceIdExpired";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::CaptureFailed: return "CaptureFailed";
    case ErrorCode::RecognitionUnavailable: return "RecognitionUnavailable";
    case ErrorCode::ScenarioError: return "ScenarioError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message, std::string detail)
    : std::runtime_error(std::move(message)), code_(code), detail_(std::move(detail)) {}

}  // namespace door
