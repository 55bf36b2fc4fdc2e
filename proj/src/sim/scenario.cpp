// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/sim/scenario.hpp"

#include <cmath>
#include <random>

#include "skl/common/error.hpp"

namespace skl::sim {

std::string_view to_string(Variant v) { return v == Variant::kLong ? "long" : "short"; }

Variant parse_variant(std::string_view s) {
  if (s == "long") return Variant::kLong;
  if (s == "short") return Variant::kShort;
  throw Error("invalid variant '" + std::string(s) + "' (expected long|short)");
}

WorldConfig make_scenario(Variant variant, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x2545F4914F6CDD1Dull + 0x1234567ull);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  WorldConfig cfg;
  cfg.rng_seed = seed;
  cfg.table = Box{Vec3(1.35, 0.0, 0.2), Vec3(0.25, 0.4, 0.2)};
  const double table_top = cfg.table.max().z();

  ObjectSpec obj;
  obj.id = "obj" + std::to_string(seed % 10);
  obj.color = object_palette()[seed % 10];
  const double half_xy = uniform(0.03, 0.045);
  const double half_z = uniform(0.03, 0.05);
  obj.half_extents = Vec3(half_xy, half_xy, half_z);

  if (variant == Variant::kShort) {
    obj.center = Vec3(uniform(1.12, 1.25), 0.0, table_top + half_z);
    cfg.start_base = BasePose{0.60, 0.0, 0.0};
  } else {
    obj.center = Vec3(uniform(1.15, 1.28), uniform(-0.2, 0.2), table_top + half_z);
    const double sx = -1.8 + uniform(-0.2, 0.2);
    const double sy = uniform(-0.5, 0.5);
    const double yaw = std::atan2(obj.center.y() - sy, obj.center.x() - sx) + uniform(-0.1, 0.1);
    cfg.start_base = BasePose{sx, sy, yaw};
    // Two pillars between the start pose and the table, low enough to keep the
    // object in view from the start pose.
    const double gap_y = uniform(-0.3, 0.3);
    cfg.obstacle_boxes.push_back(Box{Vec3(-0.3, gap_y + 0.75, 0.25), Vec3(0.15, 0.3, 0.25)});
    cfg.obstacle_boxes.push_back(Box{Vec3(-0.3, gap_y - 0.75, 0.25), Vec3(0.15, 0.3, 0.25)});
  }
  cfg.objects.push_back(obj);
  cfg.target_id = obj.id;
  cfg.validate();
  return cfg;
}

}  // namespace skl::sim
