#include <httplib.h>

#include "door/core/error.hpp"
#include "door/protocol/http.hpp"
#include "door/protocol/wire.hpp"

namespace door::protocol {
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, const WireError& error) {
  res.status = error.http_status;
  res.set_content(error_body(error), kJson);
}

// Runs `fn`, translating library errors into wire errors.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, to_wire(e));
  } catch (const json::exception& e) {
    send_error(res, {400, "BadRequest", std::string("malformed request body: ") + e.what()});
  } catch (const std::exception& e) {
    send_error(res, {500, "BadRequest", e.what()});
  }
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error&) {
    throw Error(ErrorCode::BadRequest, "request body is not valid JSON");
  }
}

}  // namespace

FaceHttpServer::FaceHttpServer(FaceApi& backend, std::string api_key)
    : backend_(backend), api_key_(std::move(api_key)), server_(std::make_unique<httplib::Server>()) {
  routes();
}

FaceHttpServer::~FaceHttpServer() { stop(); }

void FaceHttpServer::routes() {
  auto& s = *server_;
  s.set_tcp_nodelay(true);
  // Bounds how long stop() waits on idle keep-alive connections.
  s.set_keep_alive_timeout(1);

  s.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    if (req.get_header_value(kApiKeyHeader) != api_key_) {
      send_error(res, {401, "Unauthorized", "missing or invalid X-Api-Key"});
      return httplib::Server::HandlerResponse::Handled;
    }
    return httplib::Server::HandlerResponse::Unhandled;
  });

  s.Put(R"(/persongroups/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      backend_.create_group(req.matches[1]);
      res.status = 200;
    });
  });

  s.Get(R"(/persongroups/([^/]+)/persons)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      json out = json::array();
      for (const auto& p : backend_.list_persons(req.matches[1])) out.push_back(to_json(p));
      res.set_content(out.dump(), kJson);
    });
  });

  s.Post(R"(/persongroups/([^/]+)/persons)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_body(req);
      if (!body.is_object()) throw Error(ErrorCode::BadRequest, "body must be an object");
      const auto name = body.at("name").get<std::string>();
      if (name.empty()) throw Error(ErrorCode::BadRequest, "name must not be empty");
      const auto role = parse_role(body.at("role").get<std::string>());
      if (!role) throw Error(ErrorCode::BadRequest, "role must be resident, guest or blacklisted");
      std::optional<TimestampMs> expiry;
      if (body.contains("guest_expires_at")) expiry = body.at("guest_expires_at").get<TimestampMs>();
      const auto id = backend_.add_person(req.matches[1], name, *role, expiry);
      res.set_content(json{{"person_id", id}}.dump(), kJson);
    });
  });

  s.Get(R"(/persongroups/([^/]+)/persons/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { res.set_content(to_json(backend_.get_person(req.matches[1], req.matches[2])).dump(), kJson); });
  });

  s.Delete(R"(/persongroups/([^/]+)/persons/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      backend_.delete_person(req.matches[1], req.matches[2]);
      res.status = 200;
    });
  });

  s.Post(R"(/persongroups/([^/]+)/persons/([^/]+)/persistedfaces)",
         [this](const httplib::Request& req, httplib::Response& res) {
           guarded(res, [&] {
             const auto id = backend_.add_face(req.matches[1], req.matches[2], req.body);
             res.set_content(json{{"persisted_face_id", id}}.dump(), kJson);
           });
         });

  s.Post(R"(/persongroups/([^/]+)/train)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      backend_.train(req.matches[1]);
      res.status = 202;
    });
  });

  s.Get(R"(/persongroups/([^/]+)/training)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      try {
        res.set_content(json{{"status", backend_.training_status(req.matches[1])}}.dump(), kJson);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotTrained) throw;
        send_error(res, {404, "NotTrained", e.what()});
      }
    });
  });

  s.Post("/detect", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      json out = json::array();
      for (const auto& f : backend_.detect(req.body)) out.push_back(to_json(f));
      res.set_content(out.dump(), kJson);
    });
  });

  s.Post("/identify", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      json out = json::array();
      for (const auto& r : backend_.identify(identify_request_from_json(parse_body(req)))) out.push_back(to_json(r));
      res.set_content(out.dump(), kJson);
    });
  });
}

int FaceHttpServer::start(const std::string& host, int port) {
  port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (port_ < 0) throw Error(ErrorCode::ConfigInvalid, "cannot bind " + host + ":" + std::to_string(port), "faceapi_listen");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void FaceHttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace door::protocol
