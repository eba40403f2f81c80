#include "door/controller/simulation.hpp"

#include "door/core/error.hpp"
#include "door/vision/vision.hpp"

namespace door::controller {

Simulation::Simulation(const SystemConfig& config, hwsim::SimClock& clock, protocol::FaceApi& faces)
    : clock_(clock),
      board_(clock, config.solenoid_latency, config.doorbell_debounce),
      controller_(config, board_, faces, log_) {}

void Simulation::advance_to(TimestampMs t) {
  while (true) {
    const auto deadline = controller_.next_deadline();
    if (!deadline || *deadline > t) break;
    if (*deadline > clock_.now_ms()) clock_.advance_to(*deadline);
    controller_.tick();
  }
  if (t > clock_.now_ms()) clock_.advance_to(t);
  controller_.tick();
}

std::optional<AccessDecision> Simulation::press() {
  if (!board_.press_doorbell()) return std::nullopt;
  return controller_.handle_doorbell();
}

void Simulation::run(const std::vector<hwsim::ScenarioCommand>& commands) {
  for (const auto& cmd : commands) {
    advance_to(cmd.at);
    switch (cmd.kind) {
      case hwsim::ScenarioCommand::Kind::Press: press(); break;
      case hwsim::ScenarioCommand::Kind::Frame:
        try {
          board_.camera().push(vision::read_pgm_file(cmd.path));
        } catch (const Error& e) {
          throw Error(ErrorCode::ScenarioError,
                      "scenario line " + std::to_string(cmd.line) + ": cannot load frame " + cmd.path + ": " + e.what());
        }
        break;
      case hwsim::ScenarioCommand::Kind::Advance: advance(cmd.amount); break;
    }
  }
}

}  // namespace door::controller
