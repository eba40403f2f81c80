#pragma once

#include <string>

#include <json.hpp>

#include "door/core/error.hpp"
#include "door/protocol/face_api.hpp"

namespace door::protocol {

struct WireError {
  int http_status = 500;
  std::string code;
  std::string message;
};

WireError to_wire(const Error& error);
// Maps a wire error code back to the library code; unknown codes become BadRequest.
ErrorCode from_wire_code(std::string_view code);
std::string error_body(const WireError& error);

nlohmann::json to_json(const FaceBox& box);
FaceBox box_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PersonInfo& person);
PersonInfo person_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DetectedFace& face);
DetectedFace detected_from_json(const nlohmann::json& j);
nlohmann::json to_json(const IdentifyRequest& request);
IdentifyRequest identify_request_from_json(const nlohmann::json& j);
nlohmann::json to_json(const IdentifyResult& result);
IdentifyResult identify_result_from_json(const nlohmann::json& j);

}  // namespace door::protocol
