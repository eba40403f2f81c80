#include "door/hwsim/hwsim.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "door/core/error.hpp"
#include "door/vision/vision.hpp"

namespace door::hwsim {

namespace fs = std::filesystem;

namespace {
TimestampMs wall_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}
}  // namespace

SimClock::SimClock(ClockMode mode, TimestampMs start) : mode_(mode), now_(mode == ClockMode::Real ? wall_ms() : start) {}

TimestampMs SimClock::now_ms() const {
  if (mode_ == ClockMode::Manual) return now_.load();
  const TimestampMs wall = wall_ms();
  TimestampMs seen = now_.load();
  while (wall > seen && !now_.compare_exchange_weak(seen, wall)) {
  }
  return std::max(wall, seen);
}

void SimClock::advance(DurationMs ms) {
  if (mode_ != ClockMode::Manual) throw std::logic_error("advance() needs a manual clock");
  if (ms < 0) throw std::invalid_argument("clock cannot go backward");
  now_ += ms;
}

void SimClock::advance_to(TimestampMs t) {
  const TimestampMs now = now_.load();
  if (t > now) advance(t - now);
}

Level VirtualPin::level() const {
  std::lock_guard lock(mutex_);
  return level_;
}

void VirtualPin::drive(Level level, TimestampMs now) {
  std::lock_guard lock(mutex_);
  if (level == level_) return;
  level_ = level;
  history_.push_back({now, level});
}

std::vector<PinSample> VirtualPin::history() const {
  std::lock_guard lock(mutex_);
  return history_;
}

SolenoidPosition SolenoidModel::position_at(TimestampMs t) const {
  Level level = Level::Low;
  for (const auto& sample : relay_.history()) {
    if (sample.ts + latency_ > t) break;
    level = sample.level;
  }
  return level == Level::High ? SolenoidPosition::Retracted : SolenoidPosition::Extended;
}

std::vector<std::pair<TimestampMs, SolenoidPosition>> SolenoidModel::transitions() const {
  std::vector<std::pair<TimestampMs, SolenoidPosition>> out;
  for (const auto& sample : relay_.history()) {
    out.emplace_back(sample.ts + latency_,
                     sample.level == Level::High ? SolenoidPosition::Retracted : SolenoidPosition::Extended);
  }
  return out;
}

bool Doorbell::press(TimestampMs now) {
  if (last_accepted_ && now - *last_accepted_ < window_) return false;
  last_accepted_ = now;
  ++accepted_count_;
  return true;
}

void CameraSource::push(GrayImage frame) {
  std::lock_guard lock(mutex_);
  frames_.push_back(std::move(frame));
}

std::size_t CameraSource::load_directory(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  for (const auto& f : files) push(vision::read_pgm_file(f.string()));
  return files.size();
}

GrayImage CameraSource::capture() {
  std::lock_guard lock(mutex_);
  if (frames_.empty()) throw Error(ErrorCode::CaptureFailed, "CaptureFailed: no frame available");
  GrayImage frame = std::move(frames_.front());
  frames_.pop_front();
  ++capture_index_;
  return frame;
}

std::size_t CameraSource::pending() const {
  std::lock_guard lock(mutex_);
  return frames_.size();
}

Board::Board(SimClock& clock, DurationMs solenoid_latency, DurationMs debounce_window)
    : clock_(clock), solenoid_(relay_pin_, solenoid_latency), doorbell_(debounce_window) {}

void Board::set_relay(bool energized) { relay_pin_.drive(energized ? Level::High : Level::Low, clock_.now_ms()); }

std::vector<ScenarioCommand> parse_scenario(const std::string& text, const std::string& base_dir) {
  std::vector<ScenarioCommand> commands;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  TimestampMs last_at = 0;
  auto fail = [&](const std::string& why) -> void {
    throw Error(ErrorCode::ScenarioError, "scenario line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string first;
    if (!(words >> first) || first[0] == '#') continue;
    ScenarioCommand cmd;
    cmd.line = line_no;
    std::string verb;
    if (first != "at" || !(words >> cmd.at) || !(words >> verb)) fail("expected 'at <ms> <command>'");
    if (cmd.at < last_at) fail("timestamps must not decrease");
    last_at = cmd.at;
    if (verb == "press") {
      cmd.kind = ScenarioCommand::Kind::Press;
    } else if (verb == "frame") {
      cmd.kind = ScenarioCommand::Kind::Frame;
      if (!(words >> cmd.path)) fail("frame needs a path");
      if (!base_dir.empty() && fs::path(cmd.path).is_relative()) cmd.path = (fs::path(base_dir) / cmd.path).string();
    } else if (verb == "advance") {
      cmd.kind = ScenarioCommand::Kind::Advance;
      if (!(words >> cmd.amount) || cmd.amount < 0) fail("advance needs a non-negative duration");
    } else {
      fail("unknown command '" + verb + "'");
    }
    std::string extra;
    if (words >> extra) fail("trailing text '" + extra + "'");
    commands.push_back(std::move(cmd));
  }
  return commands;
}

std::vector<ScenarioCommand> load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ScenarioError, "cannot read scenario " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), fs::path(path).parent_path().string());
}

}  // namespace door::hwsim
