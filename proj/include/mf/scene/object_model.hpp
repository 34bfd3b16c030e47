#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mf/geom/pose.hpp"

namespace mf::scene {

/// Static description of a trackable rigid object: the tag rig glued to it
/// (T_tag^object per tag), which tag is the reference, and where the object
/// origin sits relative to that reference.
struct ObjectModel {
  std::string object_id;
  int target_tag_id = -1;
  std::map<int, Posed> tag_layout;  // tag id -> T_tag^object
  Posed object_from_target;         // T_object^target
  std::string display_mesh_ref;
  bool held = false;  // hand-held objects disable VIO bridging/compensation
};

/// True relative transform T_target^y induced by the layout for tag y.
Posed layoutRelative(const ObjectModel& model, int tag_id);

/// Checks target presence and that object_from_target inverts the target's
/// layout entry (tolerance 1e-9); throws ConfigError naming the object.
void validateObjectModel(const ObjectModel& model);

ObjectModel objectModelFromJson(const nlohmann::json& j, const std::string& context);
nlohmann::json objectModelToJson(const ObjectModel& model);

/// Database file: {"schema_version": 1, "objects": [ ... ]}. Object ids and
/// tag ids must be unique across the database.
std::vector<ObjectModel> objectDatabaseFromJson(const nlohmann::json& j);
nlohmann::json objectDatabaseToJson(const std::vector<ObjectModel>& models);
std::vector<ObjectModel> loadObjectDatabase(const std::string& path);

}  // namespace mf::scene
