#include "door/protocol/face_service.hpp"

#include <filesystem>
#include <mutex>

#include <fmt/format.h>

#include "door/core/config.hpp"
#include "door/core/error.hpp"
#include "door/vision/vision.hpp"

namespace door::protocol {

namespace fs = std::filesystem;

PersonInfo person_info(const PersonRecord& r) {
  return PersonInfo{r.person_id, r.name, r.role, r.enrolled_at, r.guest_expires_at,
                    static_cast<int>(r.descriptors.size())};
}

FaceService::FaceService(const Clock& clock, FaceServiceOptions options)
    : clock_(clock), options_(std::move(options)), rng_(options_.face_id_seed.value_or(std::random_device{}())) {
  if (options_.store_dir.empty()) return;
  fs::create_directories(options_.store_dir);
  for (const auto& entry : fs::directory_iterator(options_.store_dir)) {
    if (entry.path().extension() == ".json") store_.put(store::load(entry.path().string()));
  }
}

store::PersonGroup& FaceService::group_ref(const std::string& group_id) {
  auto* g = store_.find(group_id);
  if (!g) throw Error(ErrorCode::UnknownGroup, "UnknownGroup: " + group_id, group_id);
  return *g;
}

const store::PersonGroup& FaceService::group_ref(const std::string& group_id) const {
  const auto* g = store_.find(group_id);
  if (!g) throw Error(ErrorCode::UnknownGroup, "UnknownGroup: " + group_id, group_id);
  return *g;
}

void FaceService::save(const store::PersonGroup& group) const {
  if (!options_.store_dir.empty()) store::persist(group, (fs::path(options_.store_dir) / (group.id() + ".json")).string());
}

void FaceService::create_group(const std::string& group_id) {
  if (!valid_group_id(group_id)) throw Error(ErrorCode::BadRequest, "group id must match [a-z0-9_-]{1,64}");
  std::unique_lock lock(mutex_);
  const bool existed = store_.find(group_id) != nullptr;
  auto& group = store_.create_group(group_id);
  if (!existed) save(group);
}

std::string FaceService::add_person(const std::string& group_id, const std::string& name, Role role,
                                    std::optional<TimestampMs> guest_expires_at) {
  std::unique_lock lock(mutex_);
  auto& group = group_ref(group_id);
  auto id = group.add_person(name, role, guest_expires_at, clock_.now_ms());
  save(group);
  return id;
}

std::string FaceService::add_face(const std::string& group_id, const std::string& person_id, std::string_view pgm) {
  const GrayImage image = vision::decode_pgm(pgm);
  std::unique_lock lock(mutex_);
  auto& group = group_ref(group_id);
  auto id = group.add_face(person_id, image, options_.min_area_fraction);
  save(group);
  return id;
}

void FaceService::delete_person(const std::string& group_id, const std::string& person_id) {
  std::unique_lock lock(mutex_);
  auto& group = group_ref(group_id);
  group.delete_person(person_id);
  save(group);
}

PersonInfo FaceService::get_person(const std::string& group_id, const std::string& person_id) {
  std::shared_lock lock(mutex_);
  const auto* record = group_ref(group_id).find(person_id);
  if (!record) throw Error(ErrorCode::UnknownPerson, "UnknownPerson: " + person_id, person_id);
  return person_info(*record);
}

std::vector<PersonInfo> FaceService::list_persons(const std::string& group_id) {
  std::shared_lock lock(mutex_);
  std::vector<PersonInfo> out;
  for (const auto& p : group_ref(group_id).persons()) out.push_back(person_info(p));
  return out;
}

void FaceService::train(const std::string& group_id) {
  std::unique_lock lock(mutex_);
  auto& group = group_ref(group_id);
  group.train();
  save(group);
}

std::string FaceService::training_status(const std::string& group_id) {
  std::shared_lock lock(mutex_);
  if (!group_ref(group_id).ever_trained()) throw Error(ErrorCode::NotTrained, "NotTrained: no training has run");
  return "succeeded";
}

std::string FaceService::new_face_id() {
  const std::uint64_t hi = rng_();
  const std::uint64_t lo = rng_();
  return fmt::format("{:08x}-{:04x}-4{:03x}-{:04x}-{:012x}", hi >> 32, (hi >> 16) & 0xffff, hi & 0xfff,
                     0x8000 | ((lo >> 48) & 0x3fff), lo & 0xffffffffffffULL);
}

void FaceService::purge_expired(TimestampMs now) {
  std::erase_if(handles_, [now](const auto& entry) { return now > entry.second.expires_at; });
}

std::vector<DetectedFace> FaceService::detect(std::string_view pgm) {
  const GrayImage image = vision::decode_pgm(pgm);
  FaceBox box;
  try {
    box = vision::detect_face(image, options_.min_area_fraction);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoFaceFound) return {};
    throw;
  }
  const auto descriptor = vision::extract_descriptor(vision::crop(image, box));

  std::unique_lock lock(mutex_);
  const TimestampMs now = clock_.now_ms();
  purge_expired(now);
  auto face_id = new_face_id();
  handles_[face_id] = DetectedFaceHandle{face_id, descriptor, box, now + options_.face_id_ttl_ms};
  return {DetectedFace{face_id, box}};
}

std::vector<IdentifyResult> FaceService::identify(const IdentifyRequest& request) {
  const double threshold = request.confidence_threshold.value_or(options_.default_confidence_threshold);
  const int max_candidates = request.max_candidates.value_or(options_.default_max_candidates);

  std::shared_lock lock(mutex_);
  const auto& group = group_ref(request.person_group_id);
  const TimestampMs now = clock_.now_ms();
  std::vector<IdentifyResult> results;
  for (const auto& face_id : request.face_ids) {
    const auto it = handles_.find(face_id);
    if (it == handles_.end() || now > it->second.expires_at) {
      throw Error(ErrorCode::FaceIdExpired, "FaceIdExpired: " + face_id + " is unknown or expired", face_id);
    }
    results.push_back({face_id, group.identify(it->second.descriptor, threshold, max_candidates)});
  }
  return results;
}

store::PersonGroup FaceService::group(const std::string& group_id) const {
  std::shared_lock lock(mutex_);
  return group_ref(group_id);
}

void FaceService::put_group(store::PersonGroup group) {
  std::unique_lock lock(mutex_);
  save(group);
  store_.put(std::move(group));
}

std::size_t FaceService::live_handles() const {
  std::shared_lock lock(mutex_);
  return handles_.size();
}

}  // namespace door::protocol
