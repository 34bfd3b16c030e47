#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mf/geom/pose.hpp"

namespace mf::scene {

/// An object pose expressed in the helmet-camera frame, ready for export.
struct SceneObject {
  std::string object_id;
  Posed pose;  // T_object^hc
};

/// Export node: pose is relative to `parent`; the camera root is "hc".
struct SceneGraphNode {
  std::string id;
  std::string parent;
  Posed pose;
};

enum class SceneGraphHierarchy { Flat, Nested };

/// Flat: every object parented directly to "hc". Nested: the selected root
/// (default: first object) is parented to "hc" and the remaining objects are
/// chained in input order by relative pose. Raises MissingRootError when the
/// requested root is absent or a nested export has no objects.
std::vector<SceneGraphNode> exportSceneGraph(const std::vector<SceneObject>& objects,
                                             SceneGraphHierarchy hierarchy,
                                             const std::string& root_id = "");

/// Resolve all nodes back to camera-frame poses (inverse of exportSceneGraph).
std::vector<SceneObject> flattenSceneGraph(const std::vector<SceneGraphNode>& nodes);

nlohmann::json sceneGraphToJson(const std::vector<SceneGraphNode>& nodes);
std::vector<SceneGraphNode> sceneGraphFromJson(const nlohmann::json& j);

}  // namespace mf::scene
