#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "door/core/types.hpp"
#include "door/store/person_group.hpp"

namespace door::protocol {

struct DetectedFace {
  std::string face_id;
  FaceBox face_rectangle;

  friend bool operator==(const DetectedFace&, const DetectedFace&) = default;
};

struct PersonInfo {
  std::string person_id;
  std::string name;
  Role role = Role::Resident;
  TimestampMs enrolled_at = 0;
  std::optional<TimestampMs> guest_expires_at;
  int face_count = 0;

  friend bool operator==(const PersonInfo&, const PersonInfo&) = default;
};

struct IdentifyRequest {
  std::vector<std::string> face_ids;
  std::string person_group_id;
  std::optional<int> max_candidates;
  std::optional<double> confidence_threshold;
};

struct IdentifyResult {
  std::string face_id;
  std::vector<store::IdentifyCandidate> candidates;

  friend bool operator==(const IdentifyResult&, const IdentifyResult&) = default;
};

// The recognition service surface. FaceService implements it in-process,
// FaceHttpClient over the wire. Failures are door::Error with the matching code.
class FaceApi {
 public:
  virtual ~FaceApi() = default;

  virtual void create_group(const std::string& group_id) = 0;
  virtual std::string add_person(const std::string& group_id, const std::string& name, Role role,
                                 std::optional<TimestampMs> guest_expires_at) = 0;
  // `pgm` holds the encoded image bytes.
  virtual std::string add_face(const std::string& group_id, const std::string& person_id, std::string_view pgm) = 0;
  virtual void delete_person(const std::string& group_id, const std::string& person_id) = 0;
  virtual PersonInfo get_person(const std::string& group_id, const std::string& person_id) = 0;
  virtual std::vector<PersonInfo> list_persons(const std::string& group_id) = 0;
  virtual void train(const std::string& group_id) = 0;
  // "succeeded" once trained; NotTrained before any training.
  virtual std::string training_status(const std::string& group_id) = 0;
  // Zero or one face.
  virtual std::vector<DetectedFace> detect(std::string_view pgm) = 0;
  virtual std::vector<IdentifyResult> identify(const IdentifyRequest& request) = 0;
};

}  // namespace door::protocol
