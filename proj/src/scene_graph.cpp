#include "mf/scene/scene_graph.hpp"

#include <map>

#include "mf/errors.hpp"
#include "mf/serialization.hpp"

namespace mf::scene {

using nlohmann::json;

std::vector<SceneGraphNode> exportSceneGraph(const std::vector<SceneObject>& objects,
                                             SceneGraphHierarchy hierarchy,
                                             const std::string& root_id) {
  std::vector<SceneGraphNode> nodes;
  if (hierarchy == SceneGraphHierarchy::Flat) {
    nodes.reserve(objects.size());
    for (const SceneObject& obj : objects) {
      nodes.push_back({obj.object_id, "hc", obj.pose});
    }
    return nodes;
  }

  if (objects.empty()) {
    throw MissingRootError("scene_graph: nested export of an empty object set");
  }
  std::size_t root_index = 0;
  if (!root_id.empty()) {
    bool found = false;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      if (objects[i].object_id == root_id) {
        root_index = i;
        found = true;
        break;
      }
    }
    if (!found) {
      throw MissingRootError("scene_graph: root object \"" + root_id + "\" not in object set");
    }
  }

  // Root hangs off the camera; the rest chain in input order, each expressed
  // relative to its predecessor.
  nodes.push_back({objects[root_index].object_id, "hc", objects[root_index].pose});
  const SceneObject* prev = &objects[root_index];
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (i == root_index) continue;
    nodes.push_back(
        {objects[i].object_id, prev->object_id, compose(inverse(prev->pose), objects[i].pose)});
    prev = &objects[i];
  }
  return nodes;
}

std::vector<SceneObject> flattenSceneGraph(const std::vector<SceneGraphNode>& nodes) {
  std::map<std::string, Posed> resolved;
  std::vector<SceneObject> objects;
  objects.reserve(nodes.size());
  // Parents always precede children in exported graphs; a single forward pass
  // resolves every node or reports the graph as unrooted.
  for (const SceneGraphNode& node : nodes) {
    Posed in_hc;
    if (node.parent == "hc") {
      in_hc = node.pose;
    } else {
      const auto it = resolved.find(node.parent);
      if (it == resolved.end()) {
        throw MissingRootError("scene_graph: node \"" + node.id + "\" references unknown parent \"" +
                               node.parent + "\"");
      }
      in_hc = compose(it->second, node.pose);
    }
    resolved[node.id] = in_hc;
    objects.push_back({node.id, in_hc});
  }
  return objects;
}

json sceneGraphToJson(const std::vector<SceneGraphNode>& nodes) {
  json out = json::array();
  for (const SceneGraphNode& node : nodes) {
    out.push_back(json{{"id", node.id},
                       {"parent", node.parent},
                       {"translation", vector3ToJson(node.pose.translation)},
                       {"quaternion", json::array({node.pose.rotation.w(), node.pose.rotation.x(),
                                                   node.pose.rotation.y(),
                                                   node.pose.rotation.z()})}});
  }
  return out;
}

std::vector<SceneGraphNode> sceneGraphFromJson(const json& j) {
  if (!j.is_array()) throw ConfigError("scene_graph: expected an array of nodes");
  std::vector<SceneGraphNode> nodes;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string ctx = "scene_graph[" + std::to_string(i) + "]";
    requireObject(j[i], ctx);
    checkKeys(j[i], {"id", "parent", "translation", "quaternion"}, ctx);
    SceneGraphNode node;
    node.id = requireString(j[i], "id", ctx);
    node.parent = requireString(j[i], "parent", ctx);
    const Eigen::Vector3d t =
        vector3FromJson(requireKey(j[i], "translation", ctx), ctx + ".translation");
    const json& q = requireKey(j[i], "quaternion", ctx);
    if (!q.is_array() || q.size() != 4) {
      throw ConfigError(ctx + ".quaternion: expected an array of 4 numbers [w, x, y, z]");
    }
    node.pose = Posed(Eigen::Quaterniond(q[0].get<double>(), q[1].get<double>(),
                                         q[2].get<double>(), q[3].get<double>()),
                      t);
    nodes.push_back(std::move(node));
  }
  return nodes;
}

}  // namespace mf::scene
