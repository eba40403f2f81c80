#include "door/controller/admin_api.hpp"

#include <httplib.h>

#include <cmath>

#include "door/core/error.hpp"
#include "door/protocol/wire.hpp"

namespace door::controller {
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";
constexpr std::size_t kEventPageLimit = 1000;

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  res.status = status;
  res.set_content(json{{"code", code}, {"message", message}}.dump(), kJson);
}

int status_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::CaptureFailed:
    case ErrorCode::RecognitionUnavailable: return 503;
    default: return protocol::to_wire(e).http_status;
  }
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, status_for(e), to_string(e.code()), e.what());
  } catch (const json::exception& e) {
    send_error(res, 400, "BadRequest", std::string("malformed request body: ") + e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "Internal", e.what());
  }
}

json body_object(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json body;
  try {
    body = json::parse(req.body);
  } catch (const json::parse_error&) {
    throw Error(ErrorCode::BadRequest, "request body is not valid JSON");
  }
  if (!body.is_object()) throw Error(ErrorCode::BadRequest, "request body must be an object");
  return body;
}

std::uint64_t since_param(const httplib::Request& req) {
  std::string text;
  if (req.has_param("since_seq")) {
    text = req.get_param_value("since_seq");
  } else if (req.has_header("Last-Event-ID")) {
    text = req.get_header_value("Last-Event-ID");
  } else {
    return 0;
  }
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::BadRequest, "since_seq must be a non-negative integer");
  }
}

}  // namespace

json state_to_json(const LockState& state, TimestampMs now) {
  if (const auto* u = std::get_if<Unlocked>(&state)) return json{{"state", "UNLOCKED"}, {"relock_at", u->relock_at}, {"now_ms", now}};
  return json{{"state", "LOCKED"}, {"now_ms", now}};
}

json decision_to_json(const AccessDecision& d) {
  json j{{"outcome", to_string(d.outcome)}, {"reason", to_string(d.reason)}};
  if (d.person_id) j["person_id"] = *d.person_id;
  if (d.confidence) j["confidence"] = *d.confidence;
  return j;
}

AdminServer::AdminServer(EventLoop& loop, Controller& controller, hwsim::Board& board, EventLog& log)
    : loop_(loop), controller_(controller), board_(board), log_(log), server_(std::make_unique<httplib::Server>()) {
  routes();
}

AdminServer::~AdminServer() { stop(); }

void AdminServer::routes() {
  auto& s = *server_;
  s.set_tcp_nodelay(true);
  // Bounds how long stop() waits on idle keep-alive connections.
  s.set_keep_alive_timeout(1);

  s.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    if (!controller_.authorized(req.get_header_value(kAdminTokenHeader))) {
      send_error(res, 401, "Unauthorized", "missing or invalid X-Admin-Token");
      return httplib::Server::HandlerResponse::Handled;
    }
    return httplib::Server::HandlerResponse::Unhandled;
  });

  s.Get("/api/state", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(state_to_json(controller_.state(), board_.clock().now_ms()).dump(), kJson);
  });

  s.Get("/api/events", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      json events = json::array();
      for (const auto& e : log_.since(since_param(req), kEventPageLimit)) events.push_back(json::parse(to_json_line(e)));
      res.set_content(json{{"events", std::move(events)}, {"last_seq", log_.last_seq()}}.dump(), kJson);
    });
  });

  s.Get("/api/events/stream", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto cursor = std::make_shared<std::uint64_t>(since_param(req));
      res.set_header("Cache-Control", "no-cache");
      res.set_chunked_content_provider("text/event-stream", [this, cursor](std::size_t, httplib::DataSink& sink) {
        while (!stopping_) {
          const auto batch = log_.since(*cursor, kEventPageLimit);
          if (batch.empty()) {
            if (!sink.is_writable()) return false;
            log_.wait_beyond(*cursor, std::chrono::milliseconds(200));
            continue;
          }
          std::string chunk;
          for (const auto& e : batch) {
            chunk += "id: " + std::to_string(e.seq) + "\ndata: " + to_json_line(e) + "\n\n";
            *cursor = e.seq;
          }
          return sink.write(chunk.data(), chunk.size());
        }
        sink.done();
        return true;
      });
    });
  });

  s.Post("/api/unlock", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = body_object(req);
      std::optional<DurationMs> duration;
      if (body.contains("duration_s")) {
        const auto& v = body.at("duration_s");
        if (!v.is_number()) throw Error(ErrorCode::BadRequest, "duration_s must be a number");
        duration = static_cast<DurationMs>(std::llround(v.get<double>() * 1000.0));
      }
      const std::string token = req.get_header_value(kAdminTokenHeader);
      const auto decision = loop_.submit([token, duration](Controller& c) { return c.remote_unlock(token, duration); }).get();
      res.set_content(decision_to_json(decision).dump(), kJson);
    });
  });

  s.Post("/api/enroll", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = body_object(req);
      const auto name = body.at("name").get<std::string>();
      const auto role = parse_role(body.at("role").get<std::string>());
      if (!role) throw Error(ErrorCode::BadRequest, "role must be resident, guest or blacklisted");
      std::optional<TimestampMs> expiry;
      if (body.contains("guest_expires_at")) expiry = body.at("guest_expires_at").get<TimestampMs>();
      const std::string token = req.get_header_value(kAdminTokenHeader);
      const auto id =
          loop_.submit([=](Controller& c) { return c.enroll(token, name, *role, expiry); }).get();
      res.set_content(json{{"person_id", id}}.dump(), kJson);
    });
  });

  s.Get("/api/persons", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string token = req.get_header_value(kAdminTokenHeader);
      json out = json::array();
      for (const auto& p : loop_.submit([token](Controller& c) { return c.persons(token); }).get()) {
        out.push_back(protocol::to_json(p));
      }
      res.set_content(out.dump(), kJson);
    });
  });

  s.Delete(R"(/api/persons/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string token = req.get_header_value(kAdminTokenHeader);
      const std::string id = req.matches[1];
      loop_.submit([token, id](Controller& c) { c.delete_person(token, id); }).get();
      res.set_content(json{{"deleted", id}}.dump(), kJson);
    });
  });

  s.Post("/api/doorbell", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      const auto decision = loop_.submit([this](Controller& c) -> std::optional<AccessDecision> {
                                   if (!board_.press_doorbell()) return std::nullopt;
                                   return c.handle_doorbell();
                                 }).get();
      json out{{"accepted", decision.has_value()}};
      if (decision) out["decision"] = decision_to_json(*decision);
      res.set_content(out.dump(), kJson);
    });
  });
}

int AdminServer::start(const std::string& host, int port) {
  stopping_ = false;
  port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (port_ < 0) throw Error(ErrorCode::ConfigInvalid, "cannot bind " + host + ":" + std::to_string(port), "admin_listen");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void AdminServer::stop() {
  stopping_ = true;
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace door::controller
