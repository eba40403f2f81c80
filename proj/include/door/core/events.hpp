#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "door/core/clock.hpp"
#include "door/core/types.hpp"

namespace door {

enum class EventKind {
  DoorbellPressed,
  FrameCaptured,
  FaceDetected,
  NoFaceFound,
  Identified,
  AccessGranted,
  AccessDenied,
  GuestExpired,
  BlacklistAlert,
  DoorUnlocked,
  DoorRelocked,
  UserEnrolled,
  RemoteUnlock,
  Greeting,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

// Kind-specific fields; absent fields are omitted from the serialized record.
struct EventPayload {
  std::optional<std::string> person_id;
  std::optional<std::string> name;
  std::optional<std::string> role;
  std::optional<double> confidence;
  std::optional<FaceBox> box;
  std::optional<std::string> text;
  std::optional<std::string> reason;
  std::optional<std::string> recipient;
  std::optional<TimestampMs> relock_at;
  std::optional<int> width;
  std::optional<int> height;

  friend bool operator==(const EventPayload&, const EventPayload&) = default;
};

struct DoorEvent {
  std::uint64_t seq = 0;
  TimestampMs ts_ms = 0;
  EventKind kind = EventKind::DoorbellPressed;
  EventPayload payload;

  friend bool operator==(const DoorEvent&, const DoorEvent&) = default;
};

// One JSON Lines record: {"seq":..,"ts_ms":..,"kind":..,"payload":{..}}.
std::string to_json_line(const DoorEvent& event);
DoorEvent parse_json_line(std::string_view line);

// Builds the event that follows `previous_seq`.
DoorEvent next_event(std::uint64_t previous_seq, EventKind kind, EventPayload payload, const Clock& clock);

// Append-only, single-writer event log. Readers may block for new events.
class EventLog {
 public:
  EventLog() = default;
  // Also appends every event to `path` as JSON Lines.
  explicit EventLog(const std::string& path);

  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  DoorEvent append(EventKind kind, EventPayload payload, const Clock& clock);

  std::vector<DoorEvent> snapshot() const;
  // Events with seq > since_seq, at most `limit` of them.
  std::vector<DoorEvent> since(std::uint64_t since_seq, std::size_t limit = SIZE_MAX) const;
  std::uint64_t last_seq() const;

  // Blocks until an event with seq > since_seq exists, the timeout passes or close() is called.
  bool wait_beyond(std::uint64_t since_seq, std::chrono::milliseconds timeout) const;
  void close();
  bool closed() const;

  std::string to_jsonl() const;

 private:
  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  std::vector<DoorEvent> events_;
  std::ofstream sink_;
  bool closed_ = false;
};

}  // namespace door
