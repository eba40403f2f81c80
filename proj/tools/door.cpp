#include <atomic>
#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "door/cli/commands.hpp"

namespace {
std::atomic<bool> g_stop{false};
extern "C" void on_signal(int) { g_stop = true; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Face-recognition smart door: controller, recognition service and simulator"};
  app.require_subcommand(1);

  std::string config_path;

  auto* run = app.add_subcommand("run", "Run the door controller and admin API on a real clock");
  run->add_option("--config", config_path, "Configuration file")->required();

  auto* faceapi = app.add_subcommand("faceapi", "Serve the recognition service");
  faceapi->add_option("--config", config_path, "Configuration file")->required();

  door::cli::EnrollArgs enroll_args;
  std::string expires;
  auto* enroll = app.add_subcommand("enroll", "Enroll a person from an image file");
  enroll->add_option("--name", enroll_args.name, "Display name")->required();
  enroll->add_option("--role", enroll_args.role, "resident | guest | blacklisted")->required();
  enroll->add_option("--image", enroll_args.image_path, "PGM image containing the face")->required();
  auto* expires_opt = enroll->add_option("--expires", expires, "Guest expiry, ISO-8601");
  enroll->add_option("--config", enroll_args.config_path, "Configuration file")->capture_default_str();

  std::string scenario_path;
  auto* replay = app.add_subcommand("replay", "Replay a scenario script on a manual clock");
  replay->add_option("--scenario", scenario_path, "Scenario script")->required();
  replay->add_option("--config", config_path, "Configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : door::cli::kExitUsage;
  }

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  if (*run) return door::cli::run_controller(config_path, g_stop, std::cout, std::cerr);
  if (*faceapi) return door::cli::run_faceapi(config_path, g_stop, std::cout, std::cerr);
  if (*enroll) {
    if (*expires_opt) enroll_args.expires = expires;
    return door::cli::run_enroll(enroll_args, std::cout, std::cerr);
  }
  if (*replay) return door::cli::run_replay(scenario_path, config_path, std::cout, std::cerr);
  return door::cli::kExitUsage;
}
