// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Scene files are JSON documents whose keys mirror WorldConfig:
//
//   table            {center: [x,y,z], half_extents: [x,y,z]}
//   objects          [{id, center, half_extents, color: [r,g,b]}]
//   obstacle_boxes   [{center, half_extents}]
//   camera           {width, height, focal_px, baseline_m, mount_height,
//                     mount_pitch, depth_noise_sigma}
//   rng_seed, dt, start_base {x, y, yaw}, start_joints [5], target_id
//
// Missing keys take their defaults; unknown keys are rejected.

#ifndef SKL_SIM_SCENE_IO_HPP_
#define SKL_SIM_SCENE_IO_HPP_

#include <filesystem>
#include <nlohmann/json.hpp>

#include "skl/sim/types.hpp"

namespace skl::sim {

nlohmann::json scene_to_json(const WorldConfig& config);
WorldConfig scene_from_json(const nlohmann::json& j);

void save_scene(const WorldConfig& config, const std::filesystem::path& path);
WorldConfig load_scene(const std::filesystem::path& path);

}  // namespace skl::sim

#endif  // SKL_SIM_SCENE_IO_HPP_
