#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "mf/errors.hpp"
#include "mf/geom/pose.hpp"

namespace mf {

/// {"translation": [x,y,z], "quaternion": [w,x,y,z]}; the quaternion is
/// normalized on load and must have a sane norm to begin with.
nlohmann::json poseToJson(const Posed& pose);
Posed poseFromJson(const nlohmann::json& j, const std::string& context);

nlohmann::json vector3ToJson(const Eigen::Vector3d& v);
Eigen::Vector3d vector3FromJson(const nlohmann::json& j, const std::string& context);

/// Strict-schema helpers: every loader rejects unknown keys and reports the
/// offending field with its context path.
void requireObject(const nlohmann::json& j, const std::string& context);
void checkKeys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
               const std::string& context);
const nlohmann::json& requireKey(const nlohmann::json& j, const std::string& key,
                                 const std::string& context);
double requireNumber(const nlohmann::json& j, const std::string& key, const std::string& context);
double numberOr(const nlohmann::json& j, const std::string& key, double fallback,
                const std::string& context);
bool boolOr(const nlohmann::json& j, const std::string& key, bool fallback,
            const std::string& context);
std::string requireString(const nlohmann::json& j, const std::string& key,
                          const std::string& context);

/// Parse a whole file as JSON; IoError when unreadable, ConfigError on bad JSON.
nlohmann::json loadJsonFile(const std::string& path);
void writeTextFile(const std::string& path, const std::string& content);

/// Round-trip-exact decimal form of a double ("%.17g").
std::string formatDouble(double value);

}  // namespace mf
