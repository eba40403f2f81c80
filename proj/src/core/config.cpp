#include "door/core/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "door/core/error.hpp"

namespace door {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& field, const std::string& reason) {
  throw Error(ErrorCode::ConfigInvalid, "ConfigInvalid(" + field + "): " + reason, field);
}

double read_number(const json& raw, const char* key, double fallback) {
  if (!raw.contains(key)) return fallback;
  const auto& v = raw.at(key);
  if (!v.is_number()) invalid(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) invalid(key, "must be finite");
  return d;
}

std::int64_t read_integer(const json& raw, const char* key, std::int64_t fallback) {
  if (!raw.contains(key)) return fallback;
  const auto& v = raw.at(key);
  if (!v.is_number_integer()) invalid(key, "expected an integer");
  return v.get<std::int64_t>();
}

std::string read_string(const json& raw, const char* key, const std::string& fallback, bool required) {
  if (!raw.contains(key)) {
    if (required) invalid(key, "required field missing");
    return fallback;
  }
  const auto& v = raw.at(key);
  if (!v.is_string()) invalid(key, "expected a string");
  return v.get<std::string>();
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "relock_timeout", "identify_confidence_threshold", "max_candidates", "detection_area_fraction_min",
      "solenoid_latency", "face_id_ttl", "doorbell_debounce", "admin_token", "api_key",
      "recognition_endpoint", "person_group_id", "faceapi_listen", "admin_listen", "event_log",
      "store_dir", "frames_dir"};
  return keys;
}

}  // namespace

DurationMs SystemConfig::relock_timeout_ms() const { return static_cast<DurationMs>(std::llround(relock_timeout * 1000.0)); }

bool valid_group_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

ListenAddress parse_listen_address(const std::string& text, const std::string& field) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) invalid(field, "expected host:port");
  ListenAddress out;
  out.host = text.substr(0, colon);
  try {
    std::size_t used = 0;
    out.port = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) invalid(field, "port is not a number");
  } catch (const std::logic_error&) {
    invalid(field, "port is not a number");
  }
  if (out.port < 0 || out.port > 65535) invalid(field, "port out of range");
  return out;
}

SystemConfig validate_config(const json& raw) {
  if (!raw.is_object()) invalid("<root>", "configuration must be a flat object");
  for (const auto& [key, value] : raw.items()) {
    if (!known_keys().contains(key)) invalid(key, "unknown field");
  }

  SystemConfig c;
  c.relock_timeout = read_number(raw, "relock_timeout", c.relock_timeout);
  if (!(c.relock_timeout > 0.0) || c.relock_timeout_ms() <= 0) invalid("relock_timeout", "must be > 0");

  c.identify_confidence_threshold =
      read_number(raw, "identify_confidence_threshold", c.identify_confidence_threshold);
  if (c.identify_confidence_threshold < 0.0 || c.identify_confidence_threshold > 1.0) {
    invalid("identify_confidence_threshold", "must lie in [0,1]");
  }

  const auto max_candidates = read_integer(raw, "max_candidates", c.max_candidates);
  if (max_candidates < 1 || max_candidates > 1000) invalid("max_candidates", "must lie in [1,1000]");
  c.max_candidates = static_cast<int>(max_candidates);

  c.detection_area_fraction_min = read_number(raw, "detection_area_fraction_min", c.detection_area_fraction_min);
  if (c.detection_area_fraction_min < 0.0 || c.detection_area_fraction_min > 1.0) {
    invalid("detection_area_fraction_min", "must lie in [0,1]");
  }

  c.solenoid_latency = read_integer(raw, "solenoid_latency", c.solenoid_latency);
  if (c.solenoid_latency < 0) invalid("solenoid_latency", "must be >= 0");

  c.face_id_ttl = read_integer(raw, "face_id_ttl", c.face_id_ttl);
  if (c.face_id_ttl <= 0) invalid("face_id_ttl", "must be > 0");

  c.doorbell_debounce = read_integer(raw, "doorbell_debounce", c.doorbell_debounce);
  if (c.doorbell_debounce < 0) invalid("doorbell_debounce", "must be >= 0");

  c.admin_token = read_string(raw, "admin_token", {}, true);
  if (c.admin_token.empty()) invalid("admin_token", "must not be empty");
  c.api_key = read_string(raw, "api_key", {}, true);
  if (c.api_key.empty()) invalid("api_key", "must not be empty");

  c.recognition_endpoint = read_string(raw, "recognition_endpoint", {}, true);
  if (c.recognition_endpoint.rfind("http://", 0) != 0 || c.recognition_endpoint.size() <= 7) {
    invalid("recognition_endpoint", "expected http://host:port");
  }

  c.person_group_id = read_string(raw, "person_group_id", {}, true);
  if (!valid_group_id(c.person_group_id)) invalid("person_group_id", "must match [a-z0-9_-]{1,64}");

  c.faceapi_listen = read_string(raw, "faceapi_listen", c.faceapi_listen, false);
  parse_listen_address(c.faceapi_listen, "faceapi_listen");
  c.admin_listen = read_string(raw, "admin_listen", c.admin_listen, false);
  parse_listen_address(c.admin_listen, "admin_listen");

  c.event_log = read_string(raw, "event_log", c.event_log, false);
  c.store_dir = read_string(raw, "store_dir", c.store_dir, false);
  c.frames_dir = read_string(raw, "frames_dir", c.frames_dir, false);
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("<file>", "cannot read " + path);
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::parse_error& e) {
    invalid("<file>", std::string("not valid JSON: ") + e.what());
  }
  return validate_config(raw);
}

json to_json(const SystemConfig& c) {
  return json{{"relock_timeout", c.relock_timeout},
              {"identify_confidence_threshold", c.identify_confidence_threshold},
              {"max_candidates", c.max_candidates},
              {"detection_area_fraction_min", c.detection_area_fraction_min},
              {"solenoid_latency", c.solenoid_latency},
              {"face_id_ttl", c.face_id_ttl},
              {"doorbell_debounce", c.doorbell_debounce},
              {"admin_token", c.admin_token},
              {"api_key", c.api_key},
              {"recognition_endpoint", c.recognition_endpoint},
              {"person_group_id", c.person_group_id},
              {"faceapi_listen", c.faceapi_listen},
              {"admin_listen", c.admin_listen},
              {"event_log", c.event_log},
              {"store_dir", c.store_dir},
              {"frames_dir", c.frames_dir}};
}

}  // namespace door
