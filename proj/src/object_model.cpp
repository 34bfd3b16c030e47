#include "mf/scene/object_model.hpp"

#include <set>

#include "mf/serialization.hpp"

namespace mf::scene {

using nlohmann::json;

Posed layoutRelative(const ObjectModel& model, int tag_id) {
  const auto target = model.tag_layout.find(model.target_tag_id);
  const auto tag = model.tag_layout.find(tag_id);
  if (target == model.tag_layout.end() || tag == model.tag_layout.end()) {
    throw ConfigError("object \"" + model.object_id + "\": tag id " + std::to_string(tag_id) +
                      " or target not in layout");
  }
  // T_target^y = (T_y^object)^-1 * T_target^object
  return compose(inverse(tag->second), target->second);
}

void validateObjectModel(const ObjectModel& model) {
  const std::string who = "object \"" + model.object_id + "\"";
  if (model.object_id.empty()) throw ConfigError("object with empty object_id");
  if (model.tag_layout.size() < 2) {
    throw ConfigError(who + ": tag_layout needs the target and at least one other tag");
  }
  if (model.tag_layout.count(model.target_tag_id) == 0) {
    throw ConfigError(who + ": target_tag_id " + std::to_string(model.target_tag_id) +
                      " not present in tag_layout");
  }
  for (const auto& [id, pose] : model.tag_layout) {
    if (id < 0) throw ConfigError(who + ": negative tag id " + std::to_string(id));
  }
  // The object origin must be consistent with the layout: composing the
  // target's layout pose with object_from_target has to be the identity.
  const Posed round_trip =
      compose(model.tag_layout.at(model.target_tag_id), model.object_from_target);
  if (!isApprox(round_trip, Posed::Identity(), 1e-9)) {
    throw ConfigError(who + ": object_from_target does not invert the target's layout pose");
  }
}

ObjectModel objectModelFromJson(const json& j, const std::string& context) {
  requireObject(j, context);
  checkKeys(j,
            {"object_id", "target_tag_id", "tags", "object_from_target", "display_mesh_ref",
             "held"},
            context);
  ObjectModel model;
  model.object_id = requireString(j, "object_id", context);
  const double target = requireNumber(j, "target_tag_id", context);
  model.target_tag_id = static_cast<int>(target);
  const json& tags = requireKey(j, "tags", context);
  if (!tags.is_array() || tags.empty()) {
    throw ConfigError(context + ".tags: expected a non-empty array");
  }
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string tag_ctx = context + ".tags[" + std::to_string(i) + "]";
    requireObject(tags[i], tag_ctx);
    checkKeys(tags[i], {"id", "pose"}, tag_ctx);
    const int id = static_cast<int>(requireNumber(tags[i], "id", tag_ctx));
    const Posed pose = poseFromJson(requireKey(tags[i], "pose", tag_ctx), tag_ctx + ".pose");
    if (!model.tag_layout.emplace(id, pose).second) {
      throw ConfigError(tag_ctx + ": duplicate tag id " + std::to_string(id));
    }
  }
  model.object_from_target =
      poseFromJson(requireKey(j, "object_from_target", context), context + ".object_from_target");
  if (j.contains("display_mesh_ref")) {
    model.display_mesh_ref = requireString(j, "display_mesh_ref", context);
  }
  model.held = boolOr(j, "held", false, context);
  validateObjectModel(model);
  return model;
}

json objectModelToJson(const ObjectModel& model) {
  json tags = json::array();
  for (const auto& [id, pose] : model.tag_layout) {
    tags.push_back(json{{"id", id}, {"pose", poseToJson(pose)}});
  }
  return json{{"object_id", model.object_id},
              {"target_tag_id", model.target_tag_id},
              {"tags", std::move(tags)},
              {"object_from_target", poseToJson(model.object_from_target)},
              {"display_mesh_ref", model.display_mesh_ref},
              {"held", model.held}};
}

std::vector<ObjectModel> objectDatabaseFromJson(const json& j) {
  requireObject(j, "database");
  checkKeys(j, {"schema_version", "objects"}, "database");
  const double version = requireNumber(j, "schema_version", "database");
  if (version != 1.0) {
    throw ConfigError("database.schema_version: unsupported version " +
                      std::to_string(static_cast<int>(version)));
  }
  const json& objects = requireKey(j, "objects", "database");
  if (!objects.is_array()) throw ConfigError("database.objects: expected an array");
  std::vector<ObjectModel> models;
  std::set<std::string> ids;
  std::set<int> tag_ids;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    ObjectModel model =
        objectModelFromJson(objects[i], "database.objects[" + std::to_string(i) + "]");
    if (!ids.insert(model.object_id).second) {
      throw ConfigError("database: duplicate object_id \"" + model.object_id + "\"");
    }
    for (const auto& [tag_id, pose] : model.tag_layout) {
      if (!tag_ids.insert(tag_id).second) {
        throw ConfigError("database: tag id " + std::to_string(tag_id) +
                          " used by more than one object");
      }
    }
    models.push_back(std::move(model));
  }
  return models;
}

json objectDatabaseToJson(const std::vector<ObjectModel>& models) {
  json objects = json::array();
  for (const ObjectModel& model : models) objects.push_back(objectModelToJson(model));
  return json{{"schema_version", 1}, {"objects", std::move(objects)}};
}

std::vector<ObjectModel> loadObjectDatabase(const std::string& path) {
  return objectDatabaseFromJson(loadJsonFile(path));
}

}  // namespace mf::scene
