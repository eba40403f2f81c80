#include "door/store/person_group.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>

#include <fmt/format.h>

#include "door/core/error.hpp"
#include "door/vision/vision.hpp"

namespace door::store {

PersonGroup::PersonGroup(std::string group_id) : group_id_(std::move(group_id)) {}

const PersonRecord* PersonGroup::find(std::string_view person_id) const {
  const auto it = std::find_if(persons_.begin(), persons_.end(), [&](const auto& p) { return p.person_id == person_id; });
  return it == persons_.end() ? nullptr : &*it;
}

PersonRecord& PersonGroup::person(std::string_view person_id) {
  const auto it = std::find_if(persons_.begin(), persons_.end(), [&](const auto& p) { return p.person_id == person_id; });
  if (it == persons_.end()) {
    throw Error(ErrorCode::UnknownPerson, "UnknownPerson: " + std::string(person_id), std::string(person_id));
  }
  return *it;
}

void PersonGroup::mutated() { ++version_; }

std::string PersonGroup::add_person(std::string name, Role role, std::optional<TimestampMs> guest_expires_at,
                                    TimestampMs now) {
  check_role_expiry(role, guest_expires_at);
  mutated();
  // Versions never repeat, so they make collision-free ids.
  PersonRecord record;
  record.person_id = fmt::format("p{:08x}", version_);
  record.name = std::move(name);
  record.role = role;
  record.enrolled_at = now;
  record.guest_expires_at = guest_expires_at;
  persons_.push_back(std::move(record));
  return persons_.back().person_id;
}

std::string PersonGroup::add_face(std::string_view person_id, const GrayImage& image, double min_area_fraction) {
  person(person_id);
  const FaceBox box = vision::detect_face(image, min_area_fraction);
  return add_descriptor(person_id, vision::extract_descriptor(vision::crop(image, box)));
}

std::string PersonGroup::add_descriptor(std::string_view person_id, const FaceDescriptor& descriptor) {
  auto& record = person(person_id);
  record.descriptors.push_back(descriptor);
  mutated();
  return fmt::format("f{:08x}", version_);
}

void PersonGroup::delete_person(std::string_view person_id) {
  auto& record = person(person_id);
  persons_.erase(persons_.begin() + (&record - persons_.data()));
  mutated();
}

void PersonGroup::train() {
  for (const auto& p : persons_) {
    if (p.descriptors.empty()) {
      throw Error(ErrorCode::PersonWithoutFace, "PersonWithoutFace: " + p.person_id, p.person_id);
    }
  }
  trained_version_ = version_;
}

std::vector<IdentifyCandidate> PersonGroup::identify(const FaceDescriptor& query, double threshold,
                                                     int max_candidates) const {
  if (!trained()) throw Error(ErrorCode::NotTrained, "NotTrained: group " + group_id_ + " must be (re)trained");
  if (query.is_degenerate()) throw Error(ErrorCode::DegenerateDescriptor, "DegenerateDescriptor: uniform face crop");

  const auto scores = scoring::omp(persons_, query);
  std::vector<IdentifyCandidate> candidates;
  for (std::size_t i = 0; i < persons_.size(); ++i) {
    const double confidence = std::clamp(scores[i], 0.0, 1.0);
    if (confidence >= threshold) candidates.push_back({persons_[i].person_id, confidence});
  }
  // Stable: equal confidences keep enrollment order.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.confidence > b.confidence; });
  if (candidates.size() > static_cast<std::size_t>(std::max(max_candidates, 0))) {
    candidates.resize(static_cast<std::size_t>(std::max(max_candidates, 0)));
  }
  return candidates;
}

bool operator==(const PersonGroup& a, const PersonGroup& b) {
  return a.group_id_ == b.group_id_ && a.version_ == b.version_ && a.trained() == b.trained() &&
         a.persons_ == b.persons_;
}

namespace scoring {
namespace {
double best_score(const PersonRecord& person, const FaceDescriptor& query) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& d : person.descriptors) best = std::max(best, d.dot(query));
  return best;
}
}  // namespace

std::vector<double> serial(std::span<const PersonRecord> persons, const FaceDescriptor& query) {
  std::vector<double> scores(persons.size());
  for (std::size_t i = 0; i < persons.size(); ++i) scores[i] = best_score(persons[i], query);
  return scores;
}

std::vector<double> omp(std::span<const PersonRecord> persons, const FaceDescriptor& query) {
  std::vector<double> scores(persons.size());
  const auto n = static_cast<std::int64_t>(persons.size());
#pragma omp parallel for schedule(static) if (n >= 64)
  for (std::int64_t i = 0; i < n; ++i) scores[i] = best_score(persons[i], query);
  return scores;
}
}  // namespace scoring

PersonGroup& RecognitionStore::create_group(const std::string& group_id) {
  auto it = groups_.find(group_id);
  if (it == groups_.end()) it = groups_.emplace(group_id, PersonGroup(group_id)).first;
  return it->second;
}

PersonGroup* RecognitionStore::find(std::string_view group_id) {
  const auto it = groups_.find(group_id);
  return it == groups_.end() ? nullptr : &it->second;
}

const PersonGroup* RecognitionStore::find(std::string_view group_id) const {
  const auto it = groups_.find(group_id);
  return it == groups_.end() ? nullptr : &it->second;
}

void RecognitionStore::put(PersonGroup group) {
  const std::string id = group.id();
  groups_.insert_or_assign(id, std::move(group));
}

std::vector<std::string> RecognitionStore::group_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, g] : groups_) ids.push_back(id);
  return ids;
}

}  // namespace door::store
