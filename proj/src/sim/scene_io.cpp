// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/sim/scene_io.hpp"

#include <fstream>
#include <set>

#include "skl/common/error.hpp"

namespace skl::sim {
namespace {

using nlohmann::json;

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) throw FormatError("scene: '" + key + "' must be a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw FormatError("scene: '" + where + "' must be an object");
  std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, _] : j.items()) {
    if (!keys.contains(k)) throw FormatError("scene: unknown key '" + where + k + "'");
  }
}

json box_json(const Box& b) { return {{"center", vec_json(b.center)}, {"half_extents", vec_json(b.half_extents)}}; }

Box box_from(const json& j, const std::string& where) {
  reject_unknown(j, {"center", "half_extents"}, where);
  Box b;
  if (j.contains("center")) b.center = vec_from(j["center"], where + "center");
  if (j.contains("half_extents")) b.half_extents = vec_from(j["half_extents"], where + "half_extents");
  return b;
}

}  // namespace

json scene_to_json(const WorldConfig& c) {
  json objects = json::array();
  for (const auto& o : c.objects) {
    objects.push_back({{"id", o.id},
                       {"center", vec_json(o.center)},
                       {"half_extents", vec_json(o.half_extents)},
                       {"color", vec_json(o.color)}});
  }
  json obstacles = json::array();
  for (const auto& b : c.obstacle_boxes) obstacles.push_back(box_json(b));
  return {
      {"table", box_json(c.table)},
      {"objects", objects},
      {"obstacle_boxes", obstacles},
      {"camera",
       {{"width", c.camera.width},
        {"height", c.camera.height},
        {"focal_px", c.camera.focal_px},
        {"baseline_m", c.camera.baseline_m},
        {"mount_height", c.camera.mount_height},
        {"mount_pitch", c.camera.mount_pitch},
        {"depth_noise_sigma", c.camera.depth_noise_sigma}}},
      {"rng_seed", c.rng_seed},
      {"dt", c.dt},
      {"start_base", {{"x", c.start_base.x}, {"y", c.start_base.y}, {"yaw", c.start_base.yaw}}},
      {"start_joints", c.start_joints},
      {"target_id", c.target_id},
  };
}

WorldConfig scene_from_json(const json& j) {
  reject_unknown(j,
                 {"table", "objects", "obstacle_boxes", "camera", "rng_seed", "dt", "start_base",
                  "start_joints", "target_id"},
                 "");
  WorldConfig c;
  try {
    if (j.contains("table")) c.table = box_from(j["table"], "table.");
    if (j.contains("objects")) {
      for (const auto& o : j["objects"]) {
        reject_unknown(o, {"id", "center", "half_extents", "color"}, "objects[].");
        ObjectSpec spec;
        spec.id = o.at("id").get<std::string>();
        if (o.contains("center")) spec.center = vec_from(o["center"], "center");
        if (o.contains("half_extents")) spec.half_extents = vec_from(o["half_extents"], "half_extents");
        if (o.contains("color")) spec.color = vec_from(o["color"], "color");
        c.objects.push_back(spec);
      }
    }
    if (j.contains("obstacle_boxes")) {
      for (const auto& b : j["obstacle_boxes"]) c.obstacle_boxes.push_back(box_from(b, "obstacle_boxes[]."));
    }
    if (j.contains("camera")) {
      const auto& cj = j["camera"];
      reject_unknown(cj,
                     {"width", "height", "focal_px", "baseline_m", "mount_height", "mount_pitch",
                      "depth_noise_sigma"},
                     "camera.");
      c.camera.width = cj.value("width", c.camera.width);
      c.camera.height = cj.value("height", c.camera.height);
      c.camera.focal_px = cj.value("focal_px", c.camera.focal_px);
      c.camera.baseline_m = cj.value("baseline_m", c.camera.baseline_m);
      c.camera.mount_height = cj.value("mount_height", c.camera.mount_height);
      c.camera.mount_pitch = cj.value("mount_pitch", c.camera.mount_pitch);
      c.camera.depth_noise_sigma = cj.value("depth_noise_sigma", c.camera.depth_noise_sigma);
    }
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    c.dt = j.value("dt", c.dt);
    if (j.contains("start_base")) {
      const auto& b = j["start_base"];
      reject_unknown(b, {"x", "y", "yaw"}, "start_base.");
      c.start_base = BasePose{b.value("x", 0.0), b.value("y", 0.0), b.value("yaw", 0.0)};
    }
    if (j.contains("start_joints")) c.start_joints = j["start_joints"].get<JointVector>();
    c.target_id = j.value("target_id", std::string());
  } catch (const json::exception& e) {
    throw FormatError(std::string("scene: ") + e.what());
  }
  c.validate();
  return c;
}

void save_scene(const WorldConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write scene file " + path.string());
  out << scene_to_json(config).dump(2) << '\n';
}

WorldConfig load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read scene file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return scene_from_json(j);
}

}  // namespace skl::sim
