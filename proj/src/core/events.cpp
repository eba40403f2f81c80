#include "door/core/events.hpp"

#include <array>
#include <sstream>

#include <json.hpp>

#include "door/core/error.hpp"

namespace door {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::pair<EventKind, std::string_view>, 14> kKindNames{{
    {EventKind::DoorbellPressed, "DoorbellPressed"},
    {EventKind::FrameCaptured, "FrameCaptured"},
    {EventKind::FaceDetected, "FaceDetected"},
    {EventKind::NoFaceFound, "NoFaceFound"},
    {EventKind::Identified, "Identified"},
    {EventKind::AccessGranted, "AccessGranted"},
    {EventKind::AccessDenied, "AccessDenied"},
    {EventKind::GuestExpired, "GuestExpired"},
    {EventKind::BlacklistAlert, "BlacklistAlert"},
    {EventKind::DoorUnlocked, "DoorUnlocked"},
    {EventKind::DoorRelocked, "DoorRelocked"},
    {EventKind::UserEnrolled, "UserEnrolled"},
    {EventKind::RemoteUnlock, "RemoteUnlock"},
    {EventKind::Greeting, "Greeting"},
}};

ordered_json payload_to_json(const EventPayload& p) {
  ordered_json j = ordered_json::object();
  if (p.person_id) j["person_id"] = *p.person_id;
  if (p.name) j["name"] = *p.name;
  if (p.role) j["role"] = *p.role;
  if (p.confidence) j["confidence"] = *p.confidence;
  if (p.box) {
    j["face_rectangle"] = {{"left", p.box->left}, {"top", p.box->top}, {"width", p.box->width}, {"height", p.box->height}};
  }
  if (p.text) j["text"] = *p.text;
  if (p.reason) j["reason"] = *p.reason;
  if (p.recipient) j["recipient"] = *p.recipient;
  if (p.relock_at) j["relock_at"] = *p.relock_at;
  if (p.width) j["width"] = *p.width;
  if (p.height) j["height"] = *p.height;
  return j;
}

template <typename T>
void read_optional(const nlohmann::json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

std::string to_json_line(const DoorEvent& event) {
  ordered_json j;
  j["seq"] = event.seq;
  j["ts_ms"] = event.ts_ms;
  j["kind"] = std::string(to_string(event.kind));
  j["payload"] = payload_to_json(event.payload);
  return j.dump();
}

DoorEvent parse_json_line(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    DoorEvent e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.ts_ms = j.at("ts_ms").get<TimestampMs>();
    const auto kind = parse_event_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::BadRequest, "unknown event kind");
    e.kind = *kind;
    const auto& p = j.at("payload");
    read_optional(p, "person_id", e.payload.person_id);
    read_optional(p, "name", e.payload.name);
    read_optional(p, "role", e.payload.role);
    read_optional(p, "confidence", e.payload.confidence);
    if (p.contains("face_rectangle")) {
      const auto& b = p.at("face_rectangle");
      e.payload.box = FaceBox{b.at("left").get<int>(), b.at("top").get<int>(), b.at("width").get<int>(),
                              b.at("height").get<int>()};
    }
    read_optional(p, "text", e.payload.text);
    read_optional(p, "reason", e.payload.reason);
    read_optional(p, "recipient", e.payload.recipient);
    read_optional(p, "relock_at", e.payload.relock_at);
    read_optional(p, "width", e.payload.width);
    read_optional(p, "height", e.payload.height);
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::BadRequest, std::string("malformed event record: ") + ex.what());
  }
}

DoorEvent next_event(std::uint64_t previous_seq, EventKind kind, EventPayload payload, const Clock& clock) {
  return DoorEvent{previous_seq + 1, clock.now_ms(), kind, std::move(payload)};
}

EventLog::EventLog(const std::string& path) {
  if (!path.empty()) {
    sink_.open(path, std::ios::app);
    if (!sink_) throw Error(ErrorCode::ConfigInvalid, "cannot open event log " + path, "event_log");
  }
}

DoorEvent EventLog::append(EventKind kind, EventPayload payload, const Clock& clock) {
  DoorEvent event;
  {
    std::lock_guard lock(mutex_);
    const std::uint64_t previous = events_.empty() ? 0 : events_.back().seq;
    event = next_event(previous, kind, std::move(payload), clock);
    // Clocks never run backward, but a log must stay ordered even if one does.
    if (!events_.empty() && event.ts_ms < events_.back().ts_ms) event.ts_ms = events_.back().ts_ms;
    events_.push_back(event);
    if (sink_.is_open()) {
      sink_ << to_json_line(event) << '\n';
      sink_.flush();
    }
  }
  changed_.notify_all();
  return event;
}

std::vector<DoorEvent> EventLog::snapshot() const {
  std::lock_guard lock(mutex_);
  return events_;
}

std::vector<DoorEvent> EventLog::since(std::uint64_t since_seq, std::size_t limit) const {
  std::lock_guard lock(mutex_);
  std::vector<DoorEvent> out;
  // seq is gapless from 1, so event n lives at index n-1.
  for (std::size_t i = static_cast<std::size_t>(std::min<std::uint64_t>(since_seq, events_.size()));
       i < events_.size() && out.size() < limit; ++i) {
    out.push_back(events_[i]);
  }
  return out;
}

std::uint64_t EventLog::last_seq() const {
  std::lock_guard lock(mutex_);
  return events_.empty() ? 0 : events_.back().seq;
}

bool EventLog::wait_beyond(std::uint64_t since_seq, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  changed_.wait_for(lock, timeout, [&] { return closed_ || events_.size() > since_seq; });
  return events_.size() > since_seq;
}

void EventLog::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  changed_.notify_all();
}

bool EventLog::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

std::string EventLog::to_jsonl() const {
  std::ostringstream out;
  for (const auto& e : snapshot()) out << to_json_line(e) << '\n';
  return out.str();
}

}  // namespace door
