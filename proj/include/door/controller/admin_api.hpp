#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include <json.hpp>

#include "door/controller/event_loop.hpp"

namespace httplib {
class Server;
}

namespace door::controller {

inline constexpr const char* kAdminTokenHeader = "X-Admin-Token";

nlohmann::json state_to_json(const LockState& state, TimestampMs now);
nlohmann::json decision_to_json(const AccessDecision& decision);

// Admin HTTP API. Every route requires X-Admin-Token; privileged commands run on the event loop.
class AdminServer {
 public:
  AdminServer(EventLoop& loop, Controller& controller, hwsim::Board& board, EventLog& log);
  ~AdminServer();

  AdminServer(const AdminServer&) = delete;
  AdminServer& operator=(const AdminServer&) = delete;

  int start(const std::string& host, int port);
  void stop();
  int port() const noexcept { return port_; }

 private:
  void routes();

  EventLoop& loop_;
  Controller& controller_;
  hwsim::Board& board_;
  EventLog& log_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::atomic<bool> stopping_{false};
  int port_ = 0;
};

}  // namespace door::controller
