#pragma once

#include <map>
#include <optional>
#include <random>
#include <shared_mutex>

#include "door/core/clock.hpp"
#include "door/protocol/face_api.hpp"
#include "door/store/person_group.hpp"

namespace door::protocol {

struct FaceServiceOptions {
  double min_area_fraction = 0.01;
  DurationMs face_id_ttl_ms = 600'000;
  double default_confidence_threshold = 0.80;
  int default_max_candidates = 1;
  // When set, every group is loaded from and persisted to <store_dir>/<group_id>.json.
  std::string store_dir;
  // Seeds face_id generation; random when unset.
  std::optional<std::uint64_t> face_id_seed;
};

struct DetectedFaceHandle {
  std::string face_id;
  FaceDescriptor descriptor;
  FaceBox box;
  TimestampMs expires_at = 0;
};

// In-process recognition service: the store plus short-lived face handles.
class FaceService final : public FaceApi {
 public:
  FaceService(const Clock& clock, FaceServiceOptions options);

  void create_group(const std::string& group_id) override;
  std::string add_person(const std::string& group_id, const std::string& name, Role role,
                         std::optional<TimestampMs> guest_expires_at) override;
  std::string add_face(const std::string& group_id, const std::string& person_id, std::string_view pgm) override;
  void delete_person(const std::string& group_id, const std::string& person_id) override;
  PersonInfo get_person(const std::string& group_id, const std::string& person_id) override;
  std::vector<PersonInfo> list_persons(const std::string& group_id) override;
  void train(const std::string& group_id) override;
  std::string training_status(const std::string& group_id) override;
  std::vector<DetectedFace> detect(std::string_view pgm) override;
  std::vector<IdentifyResult> identify(const IdentifyRequest& request) override;

  // Copy of a group for inspection; throws UnknownGroup.
  store::PersonGroup group(const std::string& group_id) const;
  void put_group(store::PersonGroup group);
  std::size_t live_handles() const;

 private:
  store::PersonGroup& group_ref(const std::string& group_id);
  const store::PersonGroup& group_ref(const std::string& group_id) const;
  void save(const store::PersonGroup& group) const;
  std::string new_face_id();
  void purge_expired(TimestampMs now);

  const Clock& clock_;
  FaceServiceOptions options_;
  mutable std::shared_mutex mutex_;
  store::RecognitionStore store_;
  std::map<std::string, DetectedFaceHandle, std::less<>> handles_;
  std::mt19937_64 rng_;
};

PersonInfo person_info(const PersonRecord& record);

}  // namespace door::protocol
