#include <httplib.h>

#include "door/core/error.hpp"
#include "door/protocol/http.hpp"
#include "door/protocol/wire.hpp"

namespace door::protocol {
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";
constexpr const char* kOctets = "application/octet-stream";

json parse_json(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error&) {
    throw Error(ErrorCode::RecognitionUnavailable, "RecognitionUnavailable: malformed response body");
  }
}

std::string group_path(const std::string& group_id) { return "/persongroups/" + group_id; }

}  // namespace

FaceHttpClient::FaceHttpClient(const std::string& endpoint, std::string api_key, ClientOptions options)
    : client_(std::make_unique<httplib::Client>(endpoint)), api_key_(std::move(api_key)), options_(options) {
  const auto sec = options_.timeout.count() / 1000;
  const auto usec = (options_.timeout.count() % 1000) * 1000;
  client_->set_connection_timeout(sec, usec);
  client_->set_read_timeout(sec, usec);
  client_->set_write_timeout(sec, usec);
  client_->set_keep_alive(true);
  client_->set_tcp_nodelay(true);
}

FaceHttpClient::~FaceHttpClient() = default;

FaceHttpClient::Response FaceHttpClient::call(const std::string& method, const std::string& path,
                                              const std::string& body, const std::string& content_type) {
  std::lock_guard lock(mutex_);
  const httplib::Headers headers{{kApiKeyHeader, api_key_}};
  std::string last_failure = "no attempt made";
  last_attempts_ = 0;
  for (int attempt = 1; attempt <= options_.attempts; ++attempt) {
    last_attempts_ = attempt;
    httplib::Result result;
    if (method == "GET") {
      result = client_->Get(path, headers);
    } else if (method == "POST") {
      result = client_->Post(path, headers, body, content_type);
    } else if (method == "PUT") {
      result = client_->Put(path, headers, body, content_type);
    } else if (method == "DELETE") {
      result = client_->Delete(path, headers);
    } else {
      throw Error(ErrorCode::BadRequest, "unsupported method " + method);
    }
    if (!result) {
      last_failure = httplib::to_string(result.error());
      continue;
    }
    if (result->status >= 500) {
      last_failure = "HTTP " + std::to_string(result->status);
      continue;
    }
    if (result->status >= 400) {
      std::string code = "BadRequest";
      std::string message = result->body;
      try {
        const auto j = json::parse(result->body);
        code = j.at("code").get<std::string>();
        message = j.at("message").get<std::string>();
      } catch (const json::exception&) {
      }
      throw Error(from_wire_code(code), message, std::to_string(result->status));
    }
    return {result->status, result->body};
  }
  throw Error(ErrorCode::RecognitionUnavailable, "RecognitionUnavailable: " + last_failure);
}

void FaceHttpClient::create_group(const std::string& group_id) { call("PUT", group_path(group_id), "", kJson); }

std::string FaceHttpClient::add_person(const std::string& group_id, const std::string& name, Role role,
                                       std::optional<TimestampMs> guest_expires_at) {
  json body{{"name", name}, {"role", std::string(to_string(role))}};
  if (guest_expires_at) body["guest_expires_at"] = *guest_expires_at;
  const auto res = call("POST", group_path(group_id) + "/persons", body.dump(), kJson);
  return parse_json(res.body).at("person_id").get<std::string>();
}

std::string FaceHttpClient::add_face(const std::string& group_id, const std::string& person_id, std::string_view pgm) {
  const auto res =
      call("POST", group_path(group_id) + "/persons/" + person_id + "/persistedfaces", std::string(pgm), kOctets);
  return parse_json(res.body).at("persisted_face_id").get<std::string>();
}

void FaceHttpClient::delete_person(const std::string& group_id, const std::string& person_id) {
  call("DELETE", group_path(group_id) + "/persons/" + person_id, "", kJson);
}

PersonInfo FaceHttpClient::get_person(const std::string& group_id, const std::string& person_id) {
  return person_from_json(parse_json(call("GET", group_path(group_id) + "/persons/" + person_id, "", kJson).body));
}

std::vector<PersonInfo> FaceHttpClient::list_persons(const std::string& group_id) {
  std::vector<PersonInfo> out;
  for (const auto& j : parse_json(call("GET", group_path(group_id) + "/persons", "", kJson).body)) {
    out.push_back(person_from_json(j));
  }
  return out;
}

void FaceHttpClient::train(const std::string& group_id) { call("POST", group_path(group_id) + "/train", "", kJson); }

std::string FaceHttpClient::training_status(const std::string& group_id) {
  return parse_json(call("GET", group_path(group_id) + "/training", "", kJson).body).at("status").get<std::string>();
}

std::vector<DetectedFace> FaceHttpClient::detect(std::string_view pgm) {
  std::vector<DetectedFace> out;
  for (const auto& j : parse_json(call("POST", "/detect", std::string(pgm), kOctets).body)) {
    out.push_back(detected_from_json(j));
  }
  return out;
}

std::vector<IdentifyResult> FaceHttpClient::identify(const IdentifyRequest& request) {
  std::vector<IdentifyResult> out;
  for (const auto& j : parse_json(call("POST", "/identify", to_json(request).dump(), kJson).body)) {
    out.push_back(identify_result_from_json(j));
  }
  return out;
}

}  // namespace door::protocol
