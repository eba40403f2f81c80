#pragma once

#include <atomic>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "door/core/config.hpp"
#include "door/hwsim/hwsim.hpp"

namespace door::cli {

// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitDenied = 3,
  kExitScenarioIo = 4,
};

struct EnrollArgs {
  std::string config_path = "door.json";
  std::string name;
  std::string role;
  std::string image_path;
  std::optional<std::string> expires;
};

// ISO-8601 "YYYY-MM-DDTHH:MM:SS" with optional fraction and "Z" or "+HH:MM"
// suffix (no suffix means UTC). Returns epoch milliseconds.
std::optional<TimestampMs> parse_iso8601(const std::string& text);

// Event log of `commands` replayed on a manual clock starting at 0, as JSON Lines.
std::string replay_log(const SystemConfig& config, const std::vector<hwsim::ScenarioCommand>& commands);

int run_controller(const std::string& config_path, const std::atomic<bool>& stop, std::ostream& out, std::ostream& err);
int run_faceapi(const std::string& config_path, const std::atomic<bool>& stop, std::ostream& out, std::ostream& err);
int run_enroll(const EnrollArgs& args, std::ostream& out, std::ostream& err);
int run_replay(const std::string& scenario_path, const std::string& config_path, std::ostream& out, std::ostream& err);

}  // namespace door::cli
