#include "door/protocol/wire.hpp"

namespace door::protocol {

using nlohmann::json;

WireError to_wire(const Error& error) {
  const std::string message = error.what();
  switch (error.code()) {
    case ErrorCode::InvalidImage: return {400, "InvalidImage", message};
    case ErrorCode::NoFaceFound: return {400, "NoFaceFound", message};
    case ErrorCode::UnknownPerson: return {404, "UnknownPerson", message};
    case ErrorCode::UnknownGroup: return {404, "UnknownGroup", message};
    case ErrorCode::NotTrained: return {400, "NotTrained", message};
    case ErrorCode::FaceIdExpired: return {400, "FaceIdExpired", message};
    case ErrorCode::Unauthorized: return {401, "Unauthorized", message};
    case ErrorCode::PersonWithoutFace: return {400, "PersonWithoutFace", message};
    case ErrorCode::BadRequest:
    case ErrorCode::RoleExpiryMismatch:
    case ErrorCode::DegenerateDescriptor:
    case ErrorCode::InvalidBox:
    case ErrorCode::ConfigInvalid: return {400, "BadRequest", message};
    default: return {500, "BadRequest", message};
  }
}

ErrorCode from_wire_code(std::string_view code) {
  if (code == "InvalidImage") return ErrorCode::InvalidImage;
  if (code == "NoFaceFound") return ErrorCode::NoFaceFound;
  if (code == "UnknownPerson") return ErrorCode::UnknownPerson;
  if (code == "UnknownGroup") return ErrorCode::UnknownGroup;
  if (code == "NotTrained") return ErrorCode::NotTrained;
  if (code == "FaceIdExpired") return ErrorCode::FaceIdExpired;
  if (code == "Unauthorized") return ErrorCode::Unauthorized;
  if (code == "PersonWithoutFace") return ErrorCode::PersonWithoutFace;
  return ErrorCode::BadRequest;
}

std::string error_body(const WireError& error) { return json{{"code", error.code}, {"message", error.message}}.dump(); }

json to_json(const FaceBox& box) {
  return json{{"left", box.left}, {"top", box.top}, {"width", box.width}, {"height", box.height}};
}

FaceBox box_from_json(const json& j) {
  return FaceBox{j.at("left").get<int>(), j.at("top").get<int>(), j.at("width").get<int>(), j.at("height").get<int>()};
}

json to_json(const PersonInfo& p) {
  json j{{"person_id", p.person_id},
         {"name", p.name},
         {"role", std::string(to_string(p.role))},
         {"enrolled_at", p.enrolled_at},
         {"face_count", p.face_count}};
  if (p.guest_expires_at) j["guest_expires_at"] = *p.guest_expires_at;
  return j;
}

PersonInfo person_from_json(const json& j) {
  PersonInfo p;
  p.person_id = j.at("person_id").get<std::string>();
  p.name = j.at("name").get<std::string>();
  const auto role = parse_role(j.at("role").get<std::string>());
  if (!role) throw Error(ErrorCode::BadRequest, "unknown role");
  p.role = *role;
  p.enrolled_at = j.at("enrolled_at").get<TimestampMs>();
  p.face_count = j.at("face_count").get<int>();
  if (j.contains("guest_expires_at")) p.guest_expires_at = j.at("guest_expires_at").get<TimestampMs>();
  return p;
}

json to_json(const DetectedFace& face) {
  return json{{"face_id", face.face_id}, {"face_rectangle", to_json(face.face_rectangle)}};
}

DetectedFace detected_from_json(const json& j) {
  return DetectedFace{j.at("face_id").get<std::string>(), box_from_json(j.at("face_rectangle"))};
}

json to_json(const IdentifyRequest& r) {
  json j{{"face_ids", r.face_ids}, {"person_group_id", r.person_group_id}};
  if (r.max_candidates) j["max_candidates"] = *r.max_candidates;
  if (r.confidence_threshold) j["confidence_threshold"] = *r.confidence_threshold;
  return j;
}

IdentifyRequest identify_request_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::BadRequest, "identify body must be an object");
  IdentifyRequest r;
  const auto& ids = j.at("face_ids");
  if (!ids.is_array() || ids.empty()) throw Error(ErrorCode::BadRequest, "face_ids must be a non-empty array");
  for (const auto& id : ids) r.face_ids.push_back(id.get<std::string>());
  r.person_group_id = j.at("person_group_id").get<std::string>();
  if (j.contains("max_candidates")) {
    const auto& v = j.at("max_candidates");
    if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 1000) {
      throw Error(ErrorCode::BadRequest, "max_candidates must be an integer in [1,1000]");
    }
    r.max_candidates = v.get<int>();
  }
  if (j.contains("confidence_threshold")) {
    const auto& v = j.at("confidence_threshold");
    if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() > 1.0) {
      throw Error(ErrorCode::BadRequest, "confidence_threshold must lie in [0,1]");
    }
    r.confidence_threshold = v.get<double>();
  }
  return r;
}

json to_json(const IdentifyResult& result) {
  json candidates = json::array();
  for (const auto& c : result.candidates) candidates.push_back({{"person_id", c.person_id}, {"confidence", c.confidence}});
  return json{{"face_id", result.face_id}, {"candidates", std::move(candidates)}};
}

IdentifyResult identify_result_from_json(const json& j) {
  IdentifyResult r;
  r.face_id = j.at("face_id").get<std::string>();
  for (const auto& c : j.at("candidates")) {
    r.candidates.push_back({c.at("person_id").get<std::string>(), c.at("confidence").get<double>()});
  }
  return r;
}

}  // namespace door::protocol
