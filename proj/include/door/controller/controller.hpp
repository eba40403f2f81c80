#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "door/core/config.hpp"
#include "door/core/events.hpp"
#include "door/hwsim/hwsim.hpp"
#include "door/protocol/face_api.hpp"

namespace door::controller {

struct Locked {
  friend bool operator==(const Locked&, const Locked&) = default;
};
struct Unlocked {
  TimestampMs relock_at = 0;
  friend bool operator==(const Unlocked&, const Unlocked&) = default;
};
// The relay is energized exactly while the state is Unlocked.
using LockState = std::variant<Locked, Unlocked>;

enum class Outcome { Grant, Deny };
enum class Reason { Matched, BelowThreshold, NoFace, GuestExpired, Blacklisted, RecognitionUnavailable };

std::string_view to_string(Outcome outcome);
std::string_view to_string(Reason reason);

struct AccessDecision {
  Outcome outcome = Outcome::Deny;
  Reason reason = Reason::NoFace;
  std::optional<std::string> person_id;
  std::optional<double> confidence;

  friend bool operator==(const AccessDecision&, const AccessDecision&) = default;
};

inline constexpr const char* kAdminPersonId = "admin";

// Detects and crops the face in `frame` locally, then creates the person,
// uploads the crop and retrains the group. Rolls the person back if the upload
// fails. Returns the new person_id.
std::string enroll_frame(protocol::FaceApi& faces, const std::string& group_id, const GrayImage& frame,
                         double min_area_fraction, const std::string& name, Role role,
                         std::optional<TimestampMs> guest_expires_at);

// Access-control state machine. Not thread-safe apart from state(); callers
// serialize through EventLoop (live) or Simulation (manual clock).
class Controller {
 public:
  Controller(const SystemConfig& config, hwsim::Board& board, protocol::FaceApi& faces, EventLog& log);

  // Capture, detect locally, identify remotely, decide. Never throws; every
  // failure becomes a DENY.
  AccessDecision handle_doorbell();
  // Relocks once the deadline has passed. Returns true on a relock.
  bool tick();
  // Throws Unauthorized on a bad credential, BadRequest on a non-positive duration.
  AccessDecision remote_unlock(std::string_view credential, std::optional<DurationMs> duration = std::nullopt);
  // Captures one frame and enrolls it. Throws Unauthorized, CaptureFailed,
  // NoFaceFound, RoleExpiryMismatch or RecognitionUnavailable; a failed
  // enrollment leaves no person behind.
  std::string enroll(std::string_view credential, const std::string& name, Role role,
                     std::optional<TimestampMs> guest_expires_at);
  std::vector<protocol::PersonInfo> persons(std::string_view credential);
  void delete_person(std::string_view credential, const std::string& person_id);

  // De-energizes the relay, e.g. before process exit.
  void shutdown();

  LockState state() const;
  std::optional<TimestampMs> next_deadline() const;
  bool authorized(std::string_view credential) const;
  const SystemConfig& config() const noexcept { return config_; }

 private:
  struct Identification {
    protocol::PersonInfo person;
    double confidence = 0.0;
  };

  DoorEvent emit(EventKind kind, EventPayload payload = {});
  AccessDecision deny(Reason reason, std::optional<std::string> person_id = {}, std::optional<double> confidence = {});
  AccessDecision grant(const Identification& who);
  void unlock_until(TimestampMs relock_at);
  void require_admin(std::string_view credential) const;
  // Returns the decision when the remote stages fail, otherwise the match.
  std::variant<AccessDecision, Identification> identify_remote(const GrayImage& face_crop);

  SystemConfig config_;
  hwsim::Board& board_;
  protocol::FaceApi& faces_;
  EventLog& log_;
  mutable std::mutex state_mutex_;
  LockState state_ = Locked{};
};

}  // namespace door::controller
