#include "door/controller/controller.hpp"

#include "door/core/error.hpp"
#include "door/vision/vision.hpp"

namespace door::controller {

std::string_view to_string(Outcome outcome) { return outcome == Outcome::Grant ? "GRANT" : "DENY"; }

std::string_view to_string(Reason reason) {
  switch (reason) {
    case Reason::Matched: return "Matched";
    case Reason::BelowThreshold: return "BelowThreshold";
    case Reason::NoFace: return "NoFace";
    case Reason::GuestExpired: return "GuestExpired";
    case Reason::Blacklisted: return "Blacklisted";
    case Reason::RecognitionUnavailable: return "RecognitionUnavailable";
  }
  return "NoFace";
}

std::string enroll_frame(protocol::FaceApi& faces, const std::string& group_id, const GrayImage& frame,
                         double min_area_fraction, const std::string& name, Role role,
                         std::optional<TimestampMs> guest_expires_at) {
  check_role_expiry(role, guest_expires_at);
  const FaceBox box = vision::detect_face(frame, min_area_fraction);
  const std::string crop_pgm = vision::encode_pgm(vision::crop(frame, box));

  faces.create_group(group_id);
  const std::string person_id = faces.add_person(group_id, name, role, guest_expires_at);
  try {
    faces.add_face(group_id, person_id, crop_pgm);
  } catch (const Error&) {
    try {
      faces.delete_person(group_id, person_id);
    } catch (const Error&) {
      // Service gone: the faceless person blocks training until removed.
    }
    throw;
  }
  faces.train(group_id);
  constexpr int kMaxPolls = 50;
  for (int i = 0; faces.training_status(group_id) != "succeeded"; ++i) {
    if (i == kMaxPolls) throw Error(ErrorCode::RecognitionUnavailable, "RecognitionUnavailable: training did not finish");
  }
  return person_id;
}

Controller::Controller(const SystemConfig& config, hwsim::Board& board, protocol::FaceApi& faces, EventLog& log)
    : config_(config), board_(board), faces_(faces), log_(log) {}

DoorEvent Controller::emit(EventKind kind, EventPayload payload) {
  return log_.append(kind, std::move(payload), board_.clock());
}

bool Controller::authorized(std::string_view credential) const {
  const std::string& token = config_.admin_token;
  if (credential.size() != token.size()) return false;
  unsigned char diff = 0;
  for (std::size_t i = 0; i < token.size(); ++i) diff |= static_cast<unsigned char>(credential[i] ^ token[i]);
  return diff == 0;
}

void Controller::require_admin(std::string_view credential) const {
  if (!authorized(credential)) throw Error(ErrorCode::Unauthorized, "Unauthorized: invalid admin credential");
}

LockState Controller::state() const {
  std::lock_guard lock(state_mutex_);
  return state_;
}

std::optional<TimestampMs> Controller::next_deadline() const {
  std::lock_guard lock(state_mutex_);
  if (const auto* u = std::get_if<Unlocked>(&state_)) return u->relock_at;
  return std::nullopt;
}

AccessDecision Controller::deny(Reason reason, std::optional<std::string> person_id, std::optional<double> confidence) {
  EventPayload p;
  p.reason = std::string(to_string(reason));
  p.person_id = person_id;
  p.confidence = confidence;
  emit(EventKind::AccessDenied, std::move(p));
  return AccessDecision{Outcome::Deny, reason, std::move(person_id), confidence};
}

void Controller::unlock_until(TimestampMs relock_at) {
  {
    std::lock_guard lock(state_mutex_);
    if (auto* u = std::get_if<Unlocked>(&state_)) {
      u->relock_at = std::max(u->relock_at, relock_at);
      relock_at = u->relock_at;
    } else {
      state_ = Unlocked{relock_at};
      board_.set_relay(true);
    }
  }
  EventPayload p;
  p.relock_at = relock_at;
  emit(EventKind::DoorUnlocked, std::move(p));
}

AccessDecision Controller::grant(const Identification& who) {
  EventPayload greeting;
  greeting.person_id = who.person.person_id;
  greeting.text = "welcome " + who.person.name;
  emit(EventKind::Greeting, std::move(greeting));

  EventPayload granted;
  granted.person_id = who.person.person_id;
  granted.name = who.person.name;
  granted.confidence = who.confidence;
  granted.reason = std::string(to_string(Reason::Matched));
  emit(EventKind::AccessGranted, std::move(granted));

  unlock_until(board_.clock().now_ms() + config_.relock_timeout_ms());
  return AccessDecision{Outcome::Grant, Reason::Matched, who.person.person_id, who.confidence};
}

std::variant<AccessDecision, Controller::Identification> Controller::identify_remote(const GrayImage& face_crop) {
  const std::string pgm = vision::encode_pgm(face_crop);

  std::vector<protocol::DetectedFace> faces;
  try {
    faces = faces_.detect(pgm);
  } catch (const Error&) {
    return deny(Reason::RecognitionUnavailable);
  }
  if (faces.empty()) return deny(Reason::NoFace);

  protocol::IdentifyRequest request;
  request.face_ids = {faces.front().face_id};
  request.person_group_id = config_.person_group_id;
  request.max_candidates = config_.max_candidates;
  request.confidence_threshold = config_.identify_confidence_threshold;

  std::vector<protocol::IdentifyResult> results;
  try {
    results = faces_.identify(request);
  } catch (const Error& e) {
    switch (e.code()) {
      // Nobody enrolled yet, or a crop that cannot match anyone.
      case ErrorCode::NotTrained:
      case ErrorCode::UnknownGroup:
      case ErrorCode::BadRequest: return deny(Reason::BelowThreshold);
      default: return deny(Reason::RecognitionUnavailable);
    }
  }
  if (results.empty() || results.front().candidates.empty()) return deny(Reason::BelowThreshold);

  const auto& top = results.front().candidates.front();
  if (top.confidence < config_.identify_confidence_threshold) return deny(Reason::BelowThreshold);
  try {
    return Identification{faces_.get_person(config_.person_group_id, top.person_id), top.confidence};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnknownPerson) return deny(Reason::BelowThreshold);
    return deny(Reason::RecognitionUnavailable);
  }
}

AccessDecision Controller::handle_doorbell() {
  emit(EventKind::DoorbellPressed);

  GrayImage frame;
  try {
    frame = board_.camera().capture();
  } catch (const Error& e) {
    EventPayload p;
    p.reason = std::string(to_string(e.code()));
    emit(EventKind::NoFaceFound, std::move(p));
    return deny(Reason::NoFace);
  }
  EventPayload captured;
  captured.width = frame.width();
  captured.height = frame.height();
  emit(EventKind::FrameCaptured, std::move(captured));

  FaceBox box;
  try {
    box = vision::detect_face(frame, config_.detection_area_fraction_min);
  } catch (const Error& e) {
    EventPayload p;
    p.reason = std::string(to_string(e.code()));
    emit(EventKind::NoFaceFound, std::move(p));
    return deny(Reason::NoFace);
  }
  EventPayload detected;
  detected.box = box;
  emit(EventKind::FaceDetected, std::move(detected));

  auto outcome = identify_remote(vision::crop(frame, box));
  if (auto* decided = std::get_if<AccessDecision>(&outcome)) return *decided;
  const auto& who = std::get<Identification>(outcome);

  EventPayload identified;
  identified.person_id = who.person.person_id;
  identified.name = who.person.name;
  identified.role = std::string(door::to_string(who.person.role));
  identified.confidence = who.confidence;
  emit(EventKind::Identified, std::move(identified));

  switch (who.person.role) {
    case Role::Blacklisted: {
      EventPayload alert;
      alert.person_id = who.person.person_id;
      alert.name = who.person.name;
      alert.recipient = kAdminPersonId;
      alert.text = "blacklisted person " + who.person.name + " at the door";
      emit(EventKind::BlacklistAlert, std::move(alert));
      return deny(Reason::Blacklisted, who.person.person_id, who.confidence);
    }
    case Role::Guest:
      if (!who.person.guest_expires_at || board_.clock().now_ms() >= *who.person.guest_expires_at) {
        EventPayload expired;
        expired.person_id = who.person.person_id;
        expired.name = who.person.name;
        emit(EventKind::GuestExpired, std::move(expired));
        return deny(Reason::GuestExpired, who.person.person_id, who.confidence);
      }
      return grant(who);
    case Role::Resident: return grant(who);
  }
  return deny(Reason::BelowThreshold);
}

bool Controller::tick() {
  {
    std::lock_guard lock(state_mutex_);
    const auto* u = std::get_if<Unlocked>(&state_);
    if (!u || board_.clock().now_ms() < u->relock_at) return false;
    board_.set_relay(false);
    state_ = Locked{};
  }
  emit(EventKind::DoorRelocked);
  return true;
}

AccessDecision Controller::remote_unlock(std::string_view credential, std::optional<DurationMs> duration) {
  require_admin(credential);
  const DurationMs hold = duration.value_or(config_.relock_timeout_ms());
  if (hold <= 0) throw Error(ErrorCode::BadRequest, "unlock duration must be positive");

  EventPayload p;
  p.person_id = kAdminPersonId;
  p.reason = std::string(to_string(Reason::Matched));
  emit(EventKind::RemoteUnlock, std::move(p));
  unlock_until(board_.clock().now_ms() + hold);
  return AccessDecision{Outcome::Grant, Reason::Matched, std::string(kAdminPersonId), std::nullopt};
}

std::string Controller::enroll(std::string_view credential, const std::string& name, Role role,
                               std::optional<TimestampMs> guest_expires_at) {
  require_admin(credential);
  if (name.empty()) throw Error(ErrorCode::BadRequest, "name must not be empty");
  check_role_expiry(role, guest_expires_at);

  const std::string person_id = enroll_frame(faces_, config_.person_group_id, board_.camera().capture(),
                                             config_.detection_area_fraction_min, name, role, guest_expires_at);

  EventPayload p;
  p.person_id = person_id;
  p.name = name;
  p.role = std::string(door::to_string(role));
  emit(EventKind::UserEnrolled, std::move(p));
  return person_id;
}

std::vector<protocol::PersonInfo> Controller::persons(std::string_view credential) {
  require_admin(credential);
  try {
    return faces_.list_persons(config_.person_group_id);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnknownGroup) return {};
    throw;
  }
}

void Controller::delete_person(std::string_view credential, const std::string& person_id) {
  require_admin(credential);
  const std::string& group = config_.person_group_id;
  faces_.delete_person(group, person_id);
  // Retrain so identify keeps working for everyone else; an empty group stays untrained.
  if (!faces_.list_persons(group).empty()) faces_.train(group);
}

void Controller::shutdown() {
  bool was_unlocked = false;
  {
    std::lock_guard lock(state_mutex_);
    was_unlocked = std::holds_alternative<Unlocked>(state_);
    state_ = Locked{};
    board_.set_relay(false);
  }
  if (was_unlocked) {
    EventPayload p;
    p.reason = "shutdown";
    emit(EventKind::DoorRelocked, std::move(p));
  }
}

}  // namespace door::controller
