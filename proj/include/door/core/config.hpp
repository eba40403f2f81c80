#pragma once

#include <string>

#include <json.hpp>

#include "door/core/clock.hpp"

namespace door {

struct SystemConfig {
  double relock_timeout = 5.0;  // seconds
  double identify_confidence_threshold = 0.80;
  int max_candidates = 1;
  double detection_area_fraction_min = 0.01;
  DurationMs solenoid_latency = 50;
  std::int64_t face_id_ttl = 600;  // seconds
  DurationMs doorbell_debounce = 200;
  std::string admin_token;
  std::string api_key;
  std::string recognition_endpoint;
  std::string person_group_id;
  std::string faceapi_listen = "127.0.0.1:8081";
  std::string admin_listen = "127.0.0.1:8080";
  std::string event_log;
  std::string store_dir;
  std::string frames_dir;

  DurationMs relock_timeout_ms() const;
  DurationMs face_id_ttl_ms() const { return face_id_ttl * 1000; }

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

// Applies defaults and enforces ranges. Throws ConfigInvalid with the field name as detail.
SystemConfig validate_config(const nlohmann::json& raw);
SystemConfig load_config(const std::string& path);
nlohmann::json to_json(const SystemConfig& config);

bool valid_group_id(std::string_view id);

// "host:port" split; throws ConfigInvalid on malformed input.
struct ListenAddress {
  std::string host;
  int port = 0;
};
ListenAddress parse_listen_address(const std::string& text, const std::string& field);

}  // namespace door
