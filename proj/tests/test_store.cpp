#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "door/core/error.hpp"
#include "door/store/person_group.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace door;
using namespace door::store;
namespace fs = std::filesystem;

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

FaceDescriptor axis(std::size_t k) {
  FaceDescriptor d;
  d.values[k] = 1.0;
  return d;
}

}  // namespace

TEST_CASE("create_group is idempotent and starts empty") {
  RecognitionStore store;
  auto& g = store.create_group("home");
  CHECK_FALSE(g.trained());
  CHECK(g.version() == 0);
  g.add_person("Karan", Role::Resident, std::nullopt, 0);
  auto& again = store.create_group("home");
  CHECK(&again == &g);
  CHECK(again.version() == 1);
  CHECK(again.persons().size() == 1);
}

TEST_CASE("add_person: roles and expiry") {
  PersonGroup g("home");
  const auto karan = g.add_person("Karan", Role::Resident, std::nullopt, 10);
  const auto* rec = g.find(karan);
  REQUIRE(rec);
  CHECK(rec->role == Role::Resident);
  CHECK_FALSE(rec->guest_expires_at);
  CHECK(rec->descriptors.empty());
  CHECK(rec->enrolled_at == 10);

  const auto visitor = g.add_person("Visitor", Role::Guest, 3'600'000, 0);
  CHECK(g.find(visitor)->guest_expires_at == 3'600'000);
  CHECK(visitor != karan);

  CHECK(error_of([&] { g.add_person("X", Role::Guest, std::nullopt, 0); }) == ErrorCode::RoleExpiryMismatch);
  CHECK(error_of([&] { g.add_person("X", Role::Resident, 5, 0); }) == ErrorCode::RoleExpiryMismatch);
}

TEST_CASE("add_face: runs the vision pipeline") {
  PersonGroup g("home");
  const auto pid = g.add_person("Karan", Role::Resident, std::nullopt, 0);
  g.add_face(pid, testing::face_frame(1), 0.01);
  CHECK(g.find(pid)->descriptors.size() == 1);
  CHECK(std::abs(g.find(pid)->descriptors[0].norm() - 1.0) < 1e-9);

  CHECK(error_of([&] { g.add_face(pid, testing::uniform_frame(), 0.01); }) == ErrorCode::NoFaceFound);
  CHECK(error_of([&] { g.add_face("nobody", testing::face_frame(1), 0.01); }) == ErrorCode::UnknownPerson);
  CHECK(g.find(pid)->descriptors.size() == 1);
}

TEST_CASE("train and the version guard") {
  PersonGroup g("home");
  const auto a = g.add_person("A", Role::Resident, std::nullopt, 0);
  const auto b = g.add_person("B", Role::Resident, std::nullopt, 0);
  g.add_descriptor(a, axis(0));
  CHECK(error_of([&] { g.train(); }) == ErrorCode::PersonWithoutFace);
  CHECK_FALSE(g.trained());
  g.add_descriptor(b, axis(1));
  g.train();
  CHECK(g.trained());
  CHECK(g.identify(axis(0), 0.8, 1).size() == 1);

  g.add_face(a, testing::face_frame(2), 0.01);
  CHECK_FALSE(g.trained());
  CHECK(g.ever_trained());
  CHECK(error_of([&] { g.identify(axis(0), 0.8, 1); }) == ErrorCode::NotTrained);
  g.train();
  CHECK(g.identify(axis(0), 0.8, 1).size() == 1);

  g.delete_person(b);
  CHECK(error_of([&] { g.identify(axis(0), 0.8, 1); }) == ErrorCode::NotTrained);
  CHECK(error_of([&] { g.delete_person(b); }) == ErrorCode::UnknownPerson);
}

TEST_CASE("identify: worked examples") {
  PersonGroup empty("home");
  empty.train();
  CHECK(empty.identify(axis(3), 0.0, 5).empty());

  std::mt19937_64 rng(1);
  PersonGroup g("home");
  const auto a = g.add_person("A", Role::Resident, std::nullopt, 0);
  const auto b = g.add_person("B", Role::Resident, std::nullopt, 0);
  const auto da = testing::random_unit_descriptor(rng);
  const auto db = testing::orthogonal_unit(da, rng);
  g.add_descriptor(a, da);
  g.add_descriptor(b, db);
  g.train();

  const auto self = g.identify(da, 0.8, 1);
  REQUIRE(self.size() == 1);
  CHECK(self[0].person_id == a);
  CHECK(self[0].confidence == doctest::Approx(1.0).epsilon(1e-12));

  const auto query = testing::blend(0.9, da, 0.1, db);
  const auto got = g.identify(query, 0.8, 5);
  REQUIRE(got.size() == 1);
  CHECK(got[0].person_id == a);
  CHECK(std::abs(got[0].confidence - 0.9 / std::sqrt(0.82)) <= 1e-12);

  CHECK(error_of([&] { g.identify(FaceDescriptor{}, 0.8, 1); }) == ErrorCode::DegenerateDescriptor);
}

TEST_CASE("identify: ties keep enrollment order, negatives clamp to zero") {
  PersonGroup g("home");
  const auto first = g.add_person("first", Role::Resident, std::nullopt, 0);
  const auto second = g.add_person("second", Role::Resident, std::nullopt, 0);
  const auto third = g.add_person("third", Role::Resident, std::nullopt, 0);
  g.add_descriptor(second, axis(0));
  g.add_descriptor(first, axis(0));
  FaceDescriptor neg = axis(0);
  neg.values[0] = -1.0;
  g.add_descriptor(third, neg);
  g.train();
  const auto got = g.identify(axis(0), 0.0, 3);
  REQUIRE(got.size() == 3);
  CHECK(got[0].person_id == first);
  CHECK(got[1].person_id == second);
  CHECK(got[2].person_id == third);
  CHECK(got[2].confidence == 0.0);
}

TEST_CASE("identify matches the brute-force oracle on random groups") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    PersonGroup g("g");
    const int persons = static_cast<int>(rng() % 11);
    std::vector<FaceDescriptor> pool;
    for (int p = 0; p < persons; ++p) {
      const auto pid = g.add_person("p" + std::to_string(p), Role::Resident, std::nullopt, 0);
      const int count = 1 + static_cast<int>(rng() % 4);
      for (int k = 0; k < count; ++k) {
        auto d = testing::random_unit_descriptor(rng);
        // Occasionally repeat an earlier descriptor to provoke exact ties.
        if (!pool.empty() && rng() % 5 == 0) d = pool[rng() % pool.size()];
        pool.push_back(d);
        g.add_descriptor(pid, d);
      }
    }
    g.train();
    const auto query = !pool.empty() && rng() % 2 ? testing::blend(1.0, pool[rng() % pool.size()], 0.3,
                                                                    testing::random_unit_descriptor(rng))
                                                  : testing::random_unit_descriptor(rng);
    const double threshold = (rng() % 100) / 100.0 - 0.2;
    const int max_candidates = 1 + static_cast<int>(rng() % 5);

    const auto got = g.identify(query, threshold, max_candidates);
    const auto want = testing::brute_identify(g.persons(), query, threshold, max_candidates);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].person_id == want[i].person_id);
      CHECK(std::abs(got[i].confidence - want[i].confidence) <= 1e-12);
      CHECK(got[i].confidence >= threshold);
      if (i) CHECK(got[i - 1].confidence >= got[i].confidence);
    }
    CHECK(got.size() <= static_cast<std::size_t>(max_candidates));
  }
}

TEST_CASE("OpenMP scoring matches the serial reference") {
  std::mt19937_64 rng(8);
  std::vector<PersonRecord> persons(40);
  for (auto& p : persons) {
    for (int k = 0; k < 1 + static_cast<int>(rng() % 4); ++k) p.descriptors.push_back(testing::random_unit_descriptor(rng));
  }
  const auto q = testing::random_unit_descriptor(rng);
  CHECK(scoring::omp(persons, q) == scoring::serial(persons, q));
}

TEST_CASE("persistence round-trip is exact") {
  const auto dir = fs::temp_directory_path() / "door_store_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto path = (dir / "home.json").string();

  std::mt19937_64 rng(4);
  PersonGroup g("home");
  const auto a = g.add_person("Karan", Role::Resident, std::nullopt, 1'700'000'000'000);
  const auto b = g.add_person("Visitor", Role::Guest, 1'700'003'600'000, 1'700'000'000'500);
  g.add_descriptor(a, testing::random_unit_descriptor(rng));
  g.add_descriptor(a, testing::random_unit_descriptor(rng));
  g.add_descriptor(b, testing::random_unit_descriptor(rng));
  g.train();

  persist(g, path);
  const auto back = load(path);
  CHECK(back == g);
  CHECK(back.trained());
  for (std::size_t p = 0; p < g.persons().size(); ++p) {
    for (std::size_t d = 0; d < g.persons()[p].descriptors.size(); ++d) {
      CHECK(std::memcmp(back.persons()[p].descriptors[d].values.data(), g.persons()[p].descriptors[d].values.data(),
                        sizeof(double) * kDescriptorSize) == 0);
    }
  }

  // Re-persisting a loaded store keeps its version.
  auto again = back;
  again.add_person("Third", Role::Blacklisted, std::nullopt, 0);
  persist(again, path);
  CHECK(load(path).version() == again.version());
  CHECK_FALSE(load(path).trained());

  // A truncated file is corrupt.
  std::string text;
  {
    std::ifstream in(path);
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  {
    std::ofstream out(path, std::ios::trunc);
    out << text.substr(0, text.size() / 2);
  }
  CHECK(error_of([&] { load(path); }) == ErrorCode::StoreCorrupt);
  CHECK(error_of([&] { load((dir / "missing.json").string()); }) == ErrorCode::StoreCorrupt);
  fs::remove_all(dir);
}

TEST_CASE("load rejects schema violations") {
  PersonGroup g("home");
  const auto a = g.add_person("A", Role::Resident, std::nullopt, 0);
  g.add_descriptor(a, axis(2));
  const auto good = to_json(g);
  CHECK(group_from_json(good) == g);

  auto bad_role = good;
  bad_role["persons"][0]["role"] = "overlord";
  CHECK(error_of([&] { group_from_json(bad_role); }) == ErrorCode::StoreCorrupt);

  auto short_descriptor = good;
  short_descriptor["persons"][0]["descriptors"][0].erase(0);
  CHECK(error_of([&] { group_from_json(short_descriptor); }) == ErrorCode::StoreCorrupt);

  auto missing_version = good;
  missing_version.erase("version");
  CHECK(error_of([&] { group_from_json(missing_version); }) == ErrorCode::StoreCorrupt);

  auto guest_without_expiry = good;
  guest_without_expiry["persons"][0]["role"] = "guest";
  CHECK(error_of([&] { group_from_json(guest_without_expiry); }) == ErrorCode::StoreCorrupt);
}
