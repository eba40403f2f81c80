#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "door/protocol/face_api.hpp"

namespace httplib {
class Server;
class Client;
}  // namespace httplib

namespace door::protocol {

inline constexpr const char* kApiKeyHeader = "X-Api-Key";

// HTTP adapter over any FaceApi backend. Every request must carry X-Api-Key.
class FaceHttpServer {
 public:
  FaceHttpServer(FaceApi& backend, std::string api_key);
  ~FaceHttpServer();

  FaceHttpServer(const FaceHttpServer&) = delete;
  FaceHttpServer& operator=(const FaceHttpServer&) = delete;

  // Binds and serves on a background thread; port 0 picks a free port. Returns the bound port.
  int start(const std::string& host, int port);
  void stop();
  int port() const noexcept { return port_; }

 private:
  void routes();

  FaceApi& backend_;
  std::string api_key_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

struct ClientOptions {
  std::chrono::milliseconds timeout{2000};
  int attempts = 2;
};

// FaceApi over HTTP. Connection failures and 5xx are retried once, 4xx never;
// exhausting the attempts raises RecognitionUnavailable.
class FaceHttpClient final : public FaceApi {
 public:
  FaceHttpClient(const std::string& endpoint, std::string api_key, ClientOptions options = {});
  ~FaceHttpClient() override;

  void create_group(const std::string& group_id) override;
  std::string add_person(const std::string& group_id, const std::string& name, Role role,
                         std::optional<TimestampMs> guest_expires_at) override;
  std::string add_face(const std::string& group_id, const std::string& person_id, std::string_view pgm) override;
  void delete_person(const std::string& group_id, const std::string& person_id) override;
  PersonInfo get_person(const std::string& group_id, const std::string& person_id) override;
  std::vector<PersonInfo> list_persons(const std::string& group_id) override;
  void train(const std::string& group_id) override;
  std::string training_status(const std::string& group_id) override;
  std::vector<DetectedFace> detect(std::string_view pgm) override;
  std::vector<IdentifyResult> identify(const IdentifyRequest& request) override;

  struct Response {
    int status = 0;
    std::string body;
  };
  // One logical call under the retry policy. 2xx responses are returned, 4xx raise their wire error.
  Response call(const std::string& method, const std::string& path, const std::string& body,
                const std::string& content_type);
  int attempts_made() const noexcept { return last_attempts_; }

 private:
  std::mutex mutex_;
  std::unique_ptr<httplib::Client> client_;
  std::string api_key_;
  ClientOptions options_;
  int last_attempts_ = 0;
};

}  // namespace door::protocol
