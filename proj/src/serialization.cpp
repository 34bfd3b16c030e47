#include "mf/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mf {

using nlohmann::json;

json vector3ToJson(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vector3FromJson(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(context + ": expected an array of 3 numbers");
  }
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(context + ": expected an array of 3 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json poseToJson(const Posed& pose) {
  return json{{"translation", vector3ToJson(pose.translation)},
              {"quaternion", json::array({pose.rotation.w(), pose.rotation.x(),
                                          pose.rotation.y(), pose.rotation.z()})}};
}

Posed poseFromJson(const json& j, const std::string& context) {
  requireObject(j, context);
  checkKeys(j, {"translation", "quaternion"}, context);
  const Eigen::Vector3d t =
      vector3FromJson(requireKey(j, "translation", context), context + ".translation");
  const json& q = requireKey(j, "quaternion", context);
  if (!q.is_array() || q.size() != 4) {
    throw ConfigError(context + ".quaternion: expected an array of 4 numbers [w, x, y, z]");
  }
  for (const auto& e : q) {
    if (!e.is_number()) {
      throw ConfigError(context + ".quaternion: expected an array of 4 numbers [w, x, y, z]");
    }
  }
  const Eigen::Quaterniond quat(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                                q[3].get<double>());
  const double norm = quat.norm();
  if (!(norm > 1e-6) || !std::isfinite(norm)) {
    throw ConfigError(context + ".quaternion: norm " + std::to_string(norm) +
                      " too far from unit to normalize");
  }
  return Posed(quat, t);
}

void requireObject(const json& j, const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected a JSON object");
}

void checkKeys(const json& j, std::initializer_list<const char*> allowed,
               const std::string& context) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(context + ": unknown field \"" + key + "\"");
  }
}

const json& requireKey(const json& j, const std::string& key, const std::string& context) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(context + ": missing field \"" + key + "\"");
  return *it;
}

double requireNumber(const json& j, const std::string& key, const std::string& context) {
  const json& v = requireKey(j, key, context);
  if (!v.is_number()) throw ConfigError(context + "." + key + ": expected a number");
  return v.get<double>();
}

double numberOr(const json& j, const std::string& key, double fallback,
                const std::string& context) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) throw ConfigError(context + "." + key + ": expected a number");
  return it->get<double>();
}

bool boolOr(const json& j, const std::string& key, bool fallback, const std::string& context) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) throw ConfigError(context + "." + key + ": expected a boolean");
  return it->get<bool>();
}

std::string requireString(const json& j, const std::string& key, const std::string& context) {
  const json& v = requireKey(j, key, context);
  if (!v.is_string()) throw ConfigError(context + "." + key + ": expected a string");
  return v.get<std::string>();
}

json loadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  json j = json::parse(buffer.str(), nullptr, false);
  if (j.is_discarded()) throw ConfigError(path + ": invalid JSON");
  return j;
}

void writeTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path);
}

std::string formatDouble(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace mf
