#include <doctest.h>

#include <atomic>
#include <cmath>
#include <thread>

#include <httplib.h>

#include "door/core/error.hpp"
#include "door/hwsim/hwsim.hpp"
#include "door/protocol/face_service.hpp"
#include "door/protocol/http.hpp"
#include "door/protocol/wire.hpp"
#include "door/vision/vision.hpp"
#include "support/golden.hpp"
#include "support/synthetic.hpp"

using namespace door;
using namespace door::protocol;

namespace {

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::BadRequest;
}

std::string pgm(const GrayImage& image) { return vision::encode_pgm(image); }

FaceServiceOptions seeded() {
  FaceServiceOptions o;
  o.face_id_seed = 42;
  return o;
}

// Service on a manual clock behind a live HTTP server, plus a client for it.
struct Served {
  hwsim::SimClock clock{hwsim::ClockMode::Manual, 5'000};
  FaceService service{clock, seeded()};
  FaceHttpServer server{service, "k"};
  int port = server.start("127.0.0.1", 0);
  FaceHttpClient client{"http://127.0.0.1:" + std::to_string(port), "k"};
};

}  // namespace

TEST_CASE("golden conformance exchanges replay exactly") {
  const auto outcome = testing::replay_golden(DOOR_TEST_GOLDEN_DIR "/faceapi_conformance.json");
  CHECK(outcome.exchanges > 20);
  for (const auto& m : outcome.mismatches) FAIL_CHECK(m);
}

TEST_CASE("wire error mapping") {
  CHECK(to_wire(Error(ErrorCode::NoFaceFound, "x")).http_status == 400);
  CHECK(to_wire(Error(ErrorCode::UnknownPerson, "x")).http_status == 404);
  CHECK(to_wire(Error(ErrorCode::Unauthorized, "x")).http_status == 401);
  CHECK(to_wire(Error(ErrorCode::RoleExpiryMismatch, "x")).code == "BadRequest");
  CHECK(to_wire(Error(ErrorCode::DegenerateDescriptor, "x")).code == "BadRequest");
  CHECK(to_wire(Error(ErrorCode::StoreCorrupt, "x")).http_status == 500);
  for (auto code : {"InvalidImage", "NoFaceFound", "UnknownPerson", "NotTrained", "FaceIdExpired", "Unauthorized",
                    "BadRequest", "PersonWithoutFace", "UnknownGroup"}) {
    CHECK(to_wire(Error(from_wire_code(code), "m")).code == code);
  }
  CHECK(from_wire_code("SomethingElse") == ErrorCode::BadRequest);
}

TEST_CASE("client mirrors each endpoint") {
  Served s;
  auto& c = s.client;
  c.create_group("home");
  c.create_group("home");
  CHECK(error_of([&] { c.create_group("HOME!"); }) == ErrorCode::BadRequest);
  CHECK(error_of([&] { c.training_status("home"); }) == ErrorCode::NotTrained);

  const auto karan = c.add_person("home", "Karan", Role::Resident, std::nullopt);
  CHECK(error_of([&] { c.add_person("home", "V", Role::Guest, std::nullopt); }) == ErrorCode::BadRequest);
  CHECK(error_of([&] { c.add_person("elsewhere", "K", Role::Resident, std::nullopt); }) == ErrorCode::UnknownGroup);
  CHECK(error_of([&] { c.train("home"); }) == ErrorCode::PersonWithoutFace);

  CHECK(error_of([&] { c.add_face("home", karan, pgm(testing::uniform_frame())); }) == ErrorCode::NoFaceFound);
  CHECK(error_of([&] { c.add_face("home", "ghost", pgm(testing::face_frame(1))); }) == ErrorCode::UnknownPerson);
  CHECK_FALSE(c.add_face("home", karan, pgm(testing::face_frame(1))).empty());
  CHECK(c.get_person("home", karan).face_count == 1);
  CHECK(c.list_persons("home").size() == 1);

  c.train("home");
  CHECK(c.training_status("home") == "succeeded");

  CHECK(c.detect(pgm(testing::uniform_frame())).empty());
  CHECK(error_of([&] { c.detect("P5\n9 9\n255\n"); }) == ErrorCode::InvalidImage);
  const auto block = c.detect(pgm(testing::block_image(16, 16, 0, {{0, 0, 4, 4, 255}})));
  REQUIRE(block.size() == 1);
  CHECK(block[0].face_rectangle == FaceBox{0, 0, 4, 4});

  const auto faces = c.detect(pgm(testing::face_frame(1)));
  REQUIRE(faces.size() == 1);
  const auto results = c.identify({{faces[0].face_id}, "home", 1, 0.8});
  REQUIRE(results.size() == 1);
  REQUIRE(results[0].candidates.size() == 1);
  CHECK(results[0].candidates[0].person_id == karan);
  CHECK(results[0].candidates[0].confidence == doctest::Approx(1.0).epsilon(1e-12));

  c.delete_person("home", karan);
  CHECK(error_of([&] { c.get_person("home", karan); }) == ErrorCode::UnknownPerson);
}

TEST_CASE("the two-person blend scenario over the wire") {
  Served s;
  std::mt19937_64 rng(11);
  const auto query_image = testing::face_frame(6);
  const auto q = vision::extract_descriptor(vision::crop(query_image, vision::detect_face(query_image, 0.01)));
  // Choose orthonormal dA, dB with q = normalize(0.9 dA + 0.1 dB).
  const auto w = testing::orthogonal_unit(q, rng);
  const auto da = testing::blend(0.9, q, 0.1, w);
  const auto db = testing::blend(0.1, q, -0.9, w);
  CHECK(std::abs(da.dot(db)) < 1e-12);

  store::PersonGroup g("home");
  const auto a = g.add_person("A", Role::Resident, std::nullopt, 0);
  const auto b = g.add_person("B", Role::Resident, std::nullopt, 0);
  g.add_descriptor(a, da);
  g.add_descriptor(b, db);
  g.train();
  s.service.put_group(g);

  const auto faces = s.client.detect(pgm(query_image));
  REQUIRE(faces.size() == 1);
  const auto got = s.client.identify({{faces[0].face_id}, "home", 5, 0.8});
  REQUIRE(got.size() == 1);
  REQUIRE(got[0].candidates.size() == 1);
  CHECK(got[0].candidates[0].person_id == a);
  CHECK(std::abs(got[0].candidates[0].confidence - 0.9 / std::sqrt(0.82)) <= 1e-12);
}

TEST_CASE("face handles expire after the ttl") {
  Served s;
  s.client.create_group("home");
  const auto p = s.client.add_person("home", "K", Role::Resident, std::nullopt);
  s.client.add_face("home", p, pgm(testing::face_frame(2)));
  s.client.train("home");
  const auto faces = s.client.detect(pgm(testing::face_frame(2)));
  REQUIRE(faces.size() == 1);
  s.clock.advance(600'000);
  CHECK(s.client.identify({{faces[0].face_id}, "home", 1, 0.8}).size() == 1);
  s.clock.advance(1);
  CHECK(error_of([&] { s.client.identify({{faces[0].face_id}, "home", 1, 0.8}); }) == ErrorCode::FaceIdExpired);
  CHECK(error_of([&] { s.client.identify({{"not-a-face"}, "home", 1, 0.8}); }) == ErrorCode::FaceIdExpired);
}

TEST_CASE("every request needs the api key") {
  Served s;
  FaceHttpClient anonymous("http://127.0.0.1:" + std::to_string(s.port), "wrong");
  CHECK(error_of([&] { anonymous.create_group("home"); }) == ErrorCode::Unauthorized);
  CHECK(anonymous.attempts_made() == 1);

  httplib::Client raw("127.0.0.1", s.port);
  CHECK(raw.Put("/persongroups/home", "", "application/json")->status == 401);
  CHECK(raw.Get("/persongroups/home/persons")->status == 401);
  CHECK(raw.Post("/detect", "x", "application/octet-stream")->status == 401);
  CHECK(raw.Post("/identify", "{}", "application/json")->status == 401);
  CHECK(raw.Post("/persongroups/home/train", "", "application/json")->status == 401);
  CHECK(raw.Get("/persongroups/home/training")->status == 401);
  CHECK(raw.Delete("/persongroups/home/persons/p1")->status == 401);
}

TEST_CASE("client retry policy") {
  httplib::Server flaky;
  std::atomic<int> hits{0};
  flaky.Put("/persongroups/home", [&](const httplib::Request&, httplib::Response& res) {
    res.status = hits++ == 0 ? 500 : 200;
  });
  flaky.Put("/persongroups/bad", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 400;
    res.set_content(R"({"code":"NoFaceFound","message":"none"})", "application/json");
  });
  flaky.Put("/persongroups/down", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 503;
  });
  const int port = flaky.bind_to_any_port("127.0.0.1");
  std::thread t([&] { flaky.listen_after_bind(); });
  flaky.wait_until_ready();
  FaceHttpClient c("http://127.0.0.1:" + std::to_string(port), "k");

  SUBCASE("500 then 200 succeeds on the second attempt") {
    c.create_group("home");
    CHECK(c.attempts_made() == 2);
    CHECK(hits == 2);
  }
  SUBCASE("4xx is never retried") {
    CHECK(error_of([&] { c.create_group("bad"); }) == ErrorCode::NoFaceFound);
    CHECK(c.attempts_made() == 1);
    CHECK(hits == 1);
  }
  SUBCASE("persistent 5xx becomes RecognitionUnavailable") {
    CHECK(error_of([&] { c.create_group("down"); }) == ErrorCode::RecognitionUnavailable);
    CHECK(hits == 2);
  }
  flaky.stop();
  t.join();

  // Nothing listens on the port any more.
  FaceHttpClient gone("http://127.0.0.1:" + std::to_string(port), "k", ClientOptions{std::chrono::milliseconds(300), 2});
  CHECK(error_of([&] { gone.create_group("home"); }) == ErrorCode::RecognitionUnavailable);
  CHECK(gone.attempts_made() == 2);
}

TEST_CASE("the server adds nothing over the in-process service") {
  hwsim::SimClock clock(hwsim::ClockMode::Manual, 0);
  FaceService direct(clock, seeded());
  FaceService behind(clock, seeded());
  FaceHttpServer server(behind, "k");
  const int port = server.start("127.0.0.1", 0);
  FaceHttpClient remote("http://127.0.0.1:" + std::to_string(port), "k");
  FaceApi* paths[] = {&direct, &remote};

  // Runs `fn` on both paths and checks the outcomes agree, errors included.
  auto both = [&](auto fn) {
    // Compared after wire mapping: the wire code set is closed.
    std::optional<std::string> errors[2];
    decltype(fn(direct)) values[2];
    for (int i = 0; i < 2; ++i) {
      try {
        values[i] = fn(*paths[i]);
      } catch (const Error& e) {
        errors[i] = to_wire(e).code;
      }
    }
    INFO("direct: " << errors[0].value_or("ok") << ", remote: " << errors[1].value_or("ok"));
    CHECK(errors[0] == errors[1]);
    CHECK(values[0] == values[1]);
    return values[0];
  };

  std::mt19937_64 rng(21);
  both([](FaceApi& f) { f.create_group("home"); return 0; });
  both([](FaceApi& f) { f.create_group("Bad Id"); return 0; });
  std::vector<std::string> ids;
  for (int p = 0; p < 4; ++p) {
    ids.push_back(both([&](FaceApi& f) { return f.add_person("home", "n" + std::to_string(p), Role::Resident, std::nullopt); }));
    for (int k = 0; k < 2; ++k) {
      const auto frame = k == 0 ? testing::face_frame(p * 3 + k) : testing::random_detect_image(rng, 40, 40);
      const auto bytes = pgm(frame);
      both([&](FaceApi& f) { return f.add_face("home", ids.back(), bytes); });
    }
  }
  both([](FaceApi& f) { f.train("home"); return 0; });
  both([](FaceApi& f) { return f.training_status("home"); });
  both([](FaceApi& f) { return f.list_persons("home"); });
  for (int trial = 0; trial < 20; ++trial) {
    const auto frame = trial % 3 ? testing::face_frame(static_cast<int>(rng() % 12)) : testing::random_detect_image(rng, 40, 40);
    const auto bytes = pgm(frame);
    const auto faces = both([&](FaceApi& f) { return f.detect(bytes); });
    if (faces.empty()) continue;
    const double threshold = (rng() % 10) / 10.0;
    both([&](FaceApi& f) { return f.identify({{faces[0].face_id}, "home", 3, threshold}); });
  }
  both([&](FaceApi& f) { f.delete_person("home", ids[0]); return 0; });
  both([&](FaceApi& f) { return f.get_person("home", ids[0]); });
  both([&](FaceApi& f) { return f.get_person("home", ids[1]); });
  server.stop();
}

TEST_CASE("store_dir persistence survives a restart") {
  const auto dir = std::filesystem::temp_directory_path() / "door_face_service_store";
  std::filesystem::remove_all(dir);
  hwsim::SimClock clock(hwsim::ClockMode::Manual, 0);
  FaceServiceOptions options;
  options.store_dir = dir.string();
  std::string pid;
  {
    FaceService first(clock, options);
    first.create_group("home");
    pid = first.add_person("home", "Karan", Role::Resident, std::nullopt);
    first.add_face("home", pid, pgm(testing::face_frame(3)));
    first.train("home");
  }
  FaceService second(clock, options);
  CHECK(second.get_person("home", pid).face_count == 1);
  CHECK(second.training_status("home") == "succeeded");
  const auto faces = second.detect(pgm(testing::face_frame(3)));
  CHECK(second.identify({{faces.at(0).face_id}, "home", 1, 0.8}).at(0).candidates.size() == 1);
  std::filesystem::remove_all(dir);
}
