#include <filesystem>
#include <fstream>
#include <iterator>

#include "door/core/error.hpp"
#include "door/store/person_group.hpp"

namespace door::store {
namespace {

using nlohmann::json;

[[noreturn]] void corrupt(const std::string& reason) { throw Error(ErrorCode::StoreCorrupt, "StoreCorrupt: " + reason); }

}  // namespace

json to_json(const PersonGroup& group) {
  json persons = json::array();
  for (const auto& p : group.persons()) {
    json descriptors = json::array();
    for (const auto& d : p.descriptors) descriptors.push_back(d.values);
    json record{{"person_id", p.person_id},
                {"name", p.name},
                {"role", std::string(to_string(p.role))},
                {"enrolled_at", p.enrolled_at},
                {"descriptors", std::move(descriptors)}};
    if (p.guest_expires_at) record["guest_expires_at"] = *p.guest_expires_at;
    persons.push_back(std::move(record));
  }
  return json{{"group_id", group.id()}, {"version", group.version()}, {"trained", group.trained()},
              {"persons", std::move(persons)}};
}

PersonGroup group_from_json(const json& doc) {
  try {
    if (!doc.is_object()) corrupt("document is not an object");
    PersonGroup group(doc.at("group_id").get<std::string>());
    group.version_ = doc.at("version").get<std::uint64_t>();
    if (doc.at("trained").get<bool>()) group.trained_version_ = group.version_;

    for (const auto& jp : doc.at("persons")) {
      PersonRecord p;
      p.person_id = jp.at("person_id").get<std::string>();
      if (group.find(p.person_id)) corrupt("duplicate person_id " + p.person_id);
      p.name = jp.at("name").get<std::string>();
      const auto role = parse_role(jp.at("role").get<std::string>());
      if (!role) corrupt("unknown role for " + p.person_id);
      p.role = *role;
      p.enrolled_at = jp.at("enrolled_at").get<TimestampMs>();
      if (jp.contains("guest_expires_at")) p.guest_expires_at = jp.at("guest_expires_at").get<TimestampMs>();
      if ((p.role == Role::Guest) != p.guest_expires_at.has_value()) corrupt("role/expiry mismatch for " + p.person_id);
      for (const auto& jd : jp.at("descriptors")) {
        if (!jd.is_array() || jd.size() != kDescriptorSize) corrupt("descriptor must hold 256 values");
        FaceDescriptor d;
        for (std::size_t i = 0; i < kDescriptorSize; ++i) d.values[i] = jd.at(i).get<double>();
        if (!d.is_valid()) corrupt("descriptor is neither unit-norm nor zero");
        p.descriptors.push_back(d);
      }
      group.persons_.push_back(std::move(p));
    }
    return group;
  } catch (const json::exception& e) {
    corrupt(e.what());
  }
}

void persist(const PersonGroup& group, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << to_json(group).dump() << '\n';
    if (!out) throw Error(ErrorCode::StoreCorrupt, "StoreCorrupt: cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

PersonGroup load(const std::string& path) {
  std::ifstream in(path);
  if (!in) corrupt("cannot open " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    corrupt(e.what());
  }
  return group_from_json(doc);
}

}  // namespace door::store
