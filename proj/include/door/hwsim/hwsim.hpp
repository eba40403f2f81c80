#pragma once

#include <atomic>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "door/core/clock.hpp"
#include "door/core/types.hpp"

namespace door::hwsim {

enum class ClockMode { Real, Manual };

// Wall-clock milliseconds in real mode; explicit advance() only in manual mode.
// Never goes backward in either mode.
class SimClock final : public Clock {
 public:
  explicit SimClock(ClockMode mode = ClockMode::Manual, TimestampMs start = 0);

  TimestampMs now_ms() const override;
  ClockMode mode() const noexcept { return mode_; }

  void advance(DurationMs ms);
  void advance_to(TimestampMs t);

 private:
  ClockMode mode_;
  mutable std::atomic<TimestampMs> now_;
};

enum class Level { Low, High };

struct PinSample {
  TimestampMs ts = 0;
  Level level = Level::Low;
  friend bool operator==(const PinSample&, const PinSample&) = default;
};

// Records level changes only; the idle level is Low.
class VirtualPin {
 public:
  explicit VirtualPin(int pin_no) : pin_no_(pin_no) {}

  int pin_no() const noexcept { return pin_no_; }
  Level level() const;
  void drive(Level level, TimestampMs now);
  std::vector<PinSample> history() const;

 private:
  int pin_no_;
  mutable std::mutex mutex_;
  Level level_ = Level::Low;
  std::vector<PinSample> history_;
};

enum class SolenoidPosition { Extended, Retracted };

// Follows the relay pin, delayed by `latency` on the simulated clock.
// Extended (locked) while de-energized.
class SolenoidModel {
 public:
  SolenoidModel(const VirtualPin& relay, DurationMs latency) : relay_(relay), latency_(latency) {}

  SolenoidPosition position_at(TimestampMs t) const;
  DurationMs latency() const noexcept { return latency_; }
  // Relay transitions shifted by the latency.
  std::vector<std::pair<TimestampMs, SolenoidPosition>> transitions() const;

 private:
  const VirtualPin& relay_;
  DurationMs latency_;
};

// Accepts a press unless it lands within `window` of the previous accepted press.
class Doorbell {
 public:
  explicit Doorbell(DurationMs window) : window_(window) {}
  bool press(TimestampMs now);
  std::size_t accepted() const noexcept { return accepted_count_; }

 private:
  DurationMs window_;
  std::optional<TimestampMs> last_accepted_;
  std::size_t accepted_count_ = 0;
};

// FIFO of frames. capture() throws CaptureFailed on an empty queue.
class CameraSource {
 public:
  void push(GrayImage frame);
  // Appends every *.pgm in `dir`, lexicographic by file name. Returns how many were loaded.
  std::size_t load_directory(const std::string& dir);
  GrayImage capture();
  std::size_t pending() const;
  std::size_t capture_index() const noexcept { return capture_index_; }

 private:
  mutable std::mutex mutex_;
  std::deque<GrayImage> frames_;
  std::size_t capture_index_ = 0;
};

inline constexpr int kRelayPin = 17;
inline constexpr int kDoorbellPin = 27;

// The simulated board: relay driving the solenoid, the doorbell button and the camera, sharing one clock.
class Board {
 public:
  Board(SimClock& clock, DurationMs solenoid_latency, DurationMs debounce_window);

  SimClock& clock() noexcept { return clock_; }
  const SimClock& clock() const noexcept { return clock_; }

  void set_relay(bool energized);
  bool relay_energized() const { return relay_pin_.level() == Level::High; }
  SolenoidPosition read_solenoid() const { return solenoid_.position_at(clock_.now_ms()); }
  bool press_doorbell() { return doorbell_.press(clock_.now_ms()); }

  const VirtualPin& relay_pin() const noexcept { return relay_pin_; }
  const SolenoidModel& solenoid() const noexcept { return solenoid_; }
  CameraSource& camera() noexcept { return camera_; }

 private:
  SimClock& clock_;
  VirtualPin relay_pin_{kRelayPin};
  SolenoidModel solenoid_;
  Doorbell doorbell_;
  CameraSource camera_;
};

struct ScenarioCommand {
  enum class Kind { Press, Frame, Advance };
  TimestampMs at = 0;
  Kind kind = Kind::Press;
  std::string path;     // Frame
  DurationMs amount = 0;  // Advance
  int line = 0;
};

// Lines of `at <ms> press | at <ms> frame <path> | at <ms> advance <ms>`.
// Blank lines and lines starting with '#' are ignored. Relative frame paths
// resolve against `base_dir`. Throws ScenarioError.
std::vector<ScenarioCommand> parse_scenario(const std::string& text, const std::string& base_dir = {});
std::vector<ScenarioCommand> load_scenario(const std::string& path);

}  // namespace door::hwsim
