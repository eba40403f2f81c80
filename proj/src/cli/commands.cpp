#include "door/cli/commands.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <regex>
#include <sstream>
#include <thread>

#include "door/controller/admin_api.hpp"
#include "door/controller/simulation.hpp"
#include "door/core/error.hpp"
#include "door/protocol/face_service.hpp"
#include "door/protocol/http.hpp"
#include "door/vision/vision.hpp"

namespace door::cli {
namespace {

std::optional<SystemConfig> config_or_report(const std::string& path, std::ostream& err) {
  try {
    return load_config(path);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return std::nullopt;
  }
}

void wait_for(const std::atomic<bool>& stop) {
  while (!stop) std::this_thread::sleep_for(std::chrono::milliseconds(50));
}

protocol::FaceServiceOptions service_options(const SystemConfig& c) {
  protocol::FaceServiceOptions o;
  o.min_area_fraction = c.detection_area_fraction_min;
  o.face_id_ttl_ms = c.face_id_ttl_ms();
  o.default_confidence_threshold = c.identify_confidence_threshold;
  o.default_max_candidates = c.max_candidates;
  o.store_dir = c.store_dir;
  return o;
}

}  // namespace

std::optional<TimestampMs> parse_iso8601(const std::string& text) {
  static const std::regex pattern(
      R"((\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})(\.\d+)?(Z|[+-]\d{2}:\d{2})?)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) return std::nullopt;
  std::tm tm{};
  tm.tm_year = std::stoi(m[1]) - 1900;
  tm.tm_mon = std::stoi(m[2]) - 1;
  tm.tm_mday = std::stoi(m[3]);
  tm.tm_hour = std::stoi(m[4]);
  tm.tm_min = std::stoi(m[5]);
  tm.tm_sec = std::stoi(m[6]);
  if (tm.tm_mon > 11 || tm.tm_mday < 1 || tm.tm_mday > 31 || tm.tm_hour > 23 || tm.tm_min > 59 || tm.tm_sec > 60) {
    return std::nullopt;
  }
  TimestampMs ms = static_cast<TimestampMs>(timegm(&tm)) * 1000;
  if (m[7].matched) {
    const std::string frac = m[7].str().substr(1) + "00";
    ms += std::stoi(frac.substr(0, 3));
  }
  if (m[8].matched && m[8].str() != "Z") {
    const std::string off = m[8].str();
    const int minutes = std::stoi(off.substr(1, 2)) * 60 + std::stoi(off.substr(4, 2));
    ms -= (off[0] == '+' ? 1 : -1) * static_cast<TimestampMs>(minutes) * 60'000;
  }
  return ms;
}

std::string replay_log(const SystemConfig& config, const std::vector<hwsim::ScenarioCommand>& commands) {
  hwsim::SimClock clock(hwsim::ClockMode::Manual, 0);
  protocol::FaceService faces(clock, service_options(config));
  controller::Simulation sim(config, clock, faces);
  sim.run(commands);
  return sim.log().to_jsonl();
}

int run_replay(const std::string& scenario_path, const std::string& config_path, std::ostream& out, std::ostream& err) {
  const auto config = config_or_report(config_path, err);
  if (!config) return kExitUsage;
  try {
    out << replay_log(*config, hwsim::load_scenario(scenario_path));
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == ErrorCode::ScenarioError ? kExitScenarioIo : kExitFailure;
  }
}

int run_enroll(const EnrollArgs& args, std::ostream& out, std::ostream& err) {
  const auto role = parse_role(args.role);
  if (!role) {
    err << "usage: --role must be resident, guest or blacklisted\n";
    return kExitUsage;
  }
  std::optional<TimestampMs> expiry;
  if (args.expires) {
    expiry = parse_iso8601(*args.expires);
    if (!expiry) {
      err << "usage: --expires must be ISO-8601, e.g. 2026-10-16T18:00:00Z\n";
      return kExitUsage;
    }
  }
  if ((*role == Role::Guest) != expiry.has_value()) {
    err << "usage: --expires is required for guests and only allowed for guests\n";
    return kExitUsage;
  }
  const auto config = config_or_report(args.config_path, err);
  if (!config) return kExitUsage;

  GrayImage frame;
  try {
    frame = vision::read_pgm_file(args.image_path);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    protocol::FaceHttpClient client(config->recognition_endpoint, config->api_key);
    out << controller::enroll_frame(client, config->person_group_id, frame, config->detection_area_fraction_min,
                                    args.name, *role, expiry)
        << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::NoFaceFound ? kExitDenied : kExitFailure;
  }
}

int run_faceapi(const std::string& config_path, const std::atomic<bool>& stop, std::ostream& out, std::ostream& err) {
  const auto config = config_or_report(config_path, err);
  if (!config) return kExitUsage;
  try {
    const auto listen = parse_listen_address(config->faceapi_listen, "faceapi_listen");
    hwsim::SimClock clock(hwsim::ClockMode::Real);
    protocol::FaceService service(clock, service_options(*config));
    protocol::FaceHttpServer server(service, config->api_key);
    const int port = server.start(listen.host, listen.port);
    out << "face API listening on " << listen.host << ':' << port << std::endl;
    wait_for(stop);
    server.stop();
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == ErrorCode::ConfigInvalid ? kExitUsage : kExitFailure;
  }
}

int run_controller(const std::string& config_path, const std::atomic<bool>& stop, std::ostream& out,
                   std::ostream& err) {
  const auto config = config_or_report(config_path, err);
  if (!config) return kExitUsage;
  try {
    const auto listen = parse_listen_address(config->admin_listen, "admin_listen");
    hwsim::SimClock clock(hwsim::ClockMode::Real);
    hwsim::Board board(clock, config->solenoid_latency, config->doorbell_debounce);
    if (!config->frames_dir.empty()) board.camera().load_directory(config->frames_dir);
    protocol::FaceHttpClient faces(config->recognition_endpoint, config->api_key);
    EventLog log(config->event_log);
    controller::Controller controller(*config, board, faces, log);
    controller::EventLoop loop(controller);
    loop.start();
    controller::AdminServer admin(loop, controller, board, log);
    const int port = admin.start(listen.host, listen.port);
    out << "admin API listening on " << listen.host << ':' << port << std::endl;

    wait_for(stop);
    admin.stop();
    loop.stop();
    controller.shutdown();
    log.close();
    out << "relay de-energized, exiting" << std::endl;
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == ErrorCode::ConfigInvalid ? kExitUsage : kExitFailure;
  }
}

}  // namespace door::cli
