#pragma once

#include <optional>
#include <vector>

#include "door/controller/controller.hpp"
#include "door/core/events.hpp"
#include "door/hwsim/hwsim.hpp"

namespace door::controller {

// Drives the controller on a manual clock. Advancing time stops at every relock
// deadline on the way, so relocks land exactly on their deadline.
class Simulation {
 public:
  Simulation(const SystemConfig& config, hwsim::SimClock& clock, protocol::FaceApi& faces);

  hwsim::SimClock& clock() noexcept { return clock_; }
  hwsim::Board& board() noexcept { return board_; }
  const hwsim::Board& board() const noexcept { return board_; }
  Controller& controller() noexcept { return controller_; }
  EventLog& log() noexcept { return log_; }
  const EventLog& log() const noexcept { return log_; }

  void advance_to(TimestampMs t);
  void advance(DurationMs d) { advance_to(clock_.now_ms() + d); }
  // Debounced press; nullopt when the press was dropped.
  std::optional<AccessDecision> press();

  // Runs scenario commands in order. Frame files are read as they come up;
  // an unreadable frame raises ScenarioError.
  void run(const std::vector<hwsim::ScenarioCommand>& commands);

 private:
  hwsim::SimClock& clock_;
  hwsim::Board board_;
  EventLog log_;
  Controller controller_;
};

}  // namespace door::controller
