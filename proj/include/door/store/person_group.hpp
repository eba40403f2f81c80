#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "door/core/types.hpp"

namespace door::store {

struct IdentifyCandidate {
  std::string person_id;
  double confidence = 0.0;

  friend bool operator==(const IdentifyCandidate&, const IdentifyCandidate&) = default;
};

// Enrolled identities plus the training lifecycle. Every mutation bumps
// `version`; identify is legal only while the trained version is current.
class PersonGroup {
 public:
  PersonGroup() = default;
  explicit PersonGroup(std::string group_id);

  const std::string& id() const noexcept { return group_id_; }
  std::uint64_t version() const noexcept { return version_; }
  bool trained() const noexcept { return trained_version_ && *trained_version_ == version_; }
  // True once train() has succeeded at any version.
  bool ever_trained() const noexcept { return trained_version_.has_value(); }

  const std::vector<PersonRecord>& persons() const noexcept { return persons_; }
  const PersonRecord* find(std::string_view person_id) const;

  std::string add_person(std::string name, Role role, std::optional<TimestampMs> guest_expires_at, TimestampMs now);
  // Detects, crops and describes the face in `image`, then appends the descriptor.
  std::string add_face(std::string_view person_id, const GrayImage& image, double min_area_fraction);
  std::string add_descriptor(std::string_view person_id, const FaceDescriptor& descriptor);
  void delete_person(std::string_view person_id);

  void train();

  std::vector<IdentifyCandidate> identify(const FaceDescriptor& query, double threshold, int max_candidates) const;

  friend bool operator==(const PersonGroup& a, const PersonGroup& b);

 private:
  friend PersonGroup group_from_json(const nlohmann::json& doc);

  PersonRecord& person(std::string_view person_id);
  void mutated();

  std::string group_id_;
  std::vector<PersonRecord> persons_;
  std::uint64_t version_ = 0;
  std::optional<std::uint64_t> trained_version_;
};

// Per-person score is the best dot product between the query and any of the
// person's descriptors. Index-aligned with `persons`.
namespace scoring {
std::vector<double> serial(std::span<const PersonRecord> persons, const FaceDescriptor& query);
std::vector<double> omp(std::span<const PersonRecord> persons, const FaceDescriptor& query);
}  // namespace scoring

// Holds every person group by id.
class RecognitionStore {
 public:
  // Idempotent: an existing group is returned unchanged.
  PersonGroup& create_group(const std::string& group_id);
  PersonGroup* find(std::string_view group_id);
  const PersonGroup* find(std::string_view group_id) const;
  void put(PersonGroup group);
  std::vector<std::string> group_ids() const;

 private:
  std::map<std::string, PersonGroup, std::less<>> groups_;
};

nlohmann::json to_json(const PersonGroup& group);
// Throws StoreCorrupt on any schema violation.
PersonGroup group_from_json(const nlohmann::json& doc);

void persist(const PersonGroup& group, const std::string& path);
PersonGroup load(const std::string& path);

}  // namespace door::store
