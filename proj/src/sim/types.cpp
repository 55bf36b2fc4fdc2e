// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/sim/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skl/common/error.hpp"

namespace skl::sim {

JointVector clamp_joints(const JointVector& q) {
  JointVector out{};
  for (std::size_t i = 0; i < kNumJoints; ++i) out[i] = std::clamp(q[i], kJointMin[i], kJointMax[i]);
  return out;
}

bool within_limits(const JointVector& q, double slack) {
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    if (!(q[i] >= kJointMin[i] - slack && q[i] <= kJointMax[i] + slack)) return false;
  }
  return true;
}

double wrap_angle(double a) {
  constexpr double kPi = std::numbers::pi;
  a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

bool Box::contains(const Vec3& p, double inflate) const {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(p[i] - center[i]) > half_extents[i] + inflate) return false;
  }
  return true;
}

bool Box::strictly_contains(const Vec3& p) const {
  for (int i = 0; i < 3; ++i) {
    if (!(std::abs(p[i] - center[i]) < half_extents[i])) return false;
  }
  return true;
}

BaseCommand BaseCommand::clamped() const {
  return {std::clamp(v, -kMaxLinearSpeed, kMaxLinearSpeed),
          std::clamp(omega, -kMaxAngularSpeed, kMaxAngularSpeed)};
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error("invalid world config: " + what);
}

bool positive(const Vec3& v) { return (v.array() > 0.0).all(); }

}  // namespace

void WorldConfig::validate() const {
  require(dt > 0.0, "dt must be positive");
  require(positive(table.half_extents), "table extents must be positive");
  require(!objects.empty(), "at least one object required");
  for (const auto& b : obstacle_boxes) require(positive(b.half_extents), "obstacle extents must be positive");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    require(positive(objects[i].half_extents), "object '" + objects[i].id + "' extents must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      require(objects[i].id != objects[j].id, "duplicate object id '" + objects[i].id + "'");
      require((objects[i].color - objects[j].color).norm() >= 0.3,
              "objects '" + objects[i].id + "' and '" + objects[j].id + "' colors closer than 0.3");
    }
  }
  require(camera.focal_px > 0.0 && camera.baseline_m > 0.0, "camera focal and baseline must be positive");
  require(camera.width > 0 && camera.height > 0, "camera resolution must be positive");
  require(camera.depth_noise_sigma >= 0.0, "depth noise must be non-negative");
  require(within_limits(start_joints), "start joints out of limits");
  if (!target_id.empty()) (void)object(target_id);
}

const ObjectSpec& WorldConfig::object(const std::string& id) const {
  for (const auto& o : objects) {
    if (o.id == id) return o;
  }
  throw Error("unknown object '" + id + "'");
}

const std::array<Rgb, 10>& object_palette() {
  static const std::array<Rgb, 10> palette = {
      Rgb(0.9, 0.1, 0.1),   Rgb(0.1, 0.8, 0.1),  Rgb(0.1, 0.2, 0.9),  Rgb(0.9, 0.9, 0.1),
      Rgb(0.9, 0.1, 0.9),   Rgb(0.1, 0.9, 0.9),  Rgb(1.0, 0.55, 0.0), Rgb(0.95, 0.95, 0.95),
      Rgb(0.5, 0.1, 0.7),   Rgb(1.0, 0.6, 0.7),
  };
  return palette;
}

}  // namespace skl::sim
