// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "skl/common/error.hpp"
#include "skl/sim/arm.hpp"

namespace skl::sim {
namespace {

constexpr double kFloorHalfSize = 20.0;

/// Slab test. Returns the entry distance along `dir` or +inf on miss. Rays
/// starting inside a box report a miss.
double ray_box(const Vec3& origin, const Vec3& dir, const Box& box) {
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  const Vec3 lo = box.min();
  const Vec3 hi = box.max();
  for (int i = 0; i < 3; ++i) {
    if (dir[i] == 0.0) {
      if (origin[i] < lo[i] || origin[i] > hi[i]) return std::numeric_limits<double>::infinity();
      continue;
    }
    double t0 = (lo[i] - origin[i]) / dir[i];
    double t1 = (hi[i] - origin[i]) / dir[i];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
  }
  if (t_near > t_far || t_near <= 0.0) return std::numeric_limits<double>::infinity();
  return t_near;
}

std::uint8_t to_byte(double c) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
}

/// Distance from a 2D point to the footprint rectangle of a box.
double footprint_distance(const Vec2& p, const Box& box) {
  const double dx = std::max(0.0, std::abs(p.x() - box.center.x()) - box.half_extents.x());
  const double dy = std::max(0.0, std::abs(p.y() - box.center.y()) - box.half_extents.y());
  return std::hypot(dx, dy);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tick) {
  // splitmix64 finaliser over the combined words
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (tick + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

bool CameraPose::project(const Vec3& p, const CameraIntrinsics& cam, double& u, double& v) const {
  const Vec3 d = p - origin;
  const double z = d.dot(forward);
  if (z <= 0.0) return false;
  u = cam.focal_px * d.dot(right) / z + 0.5 * cam.width;
  v = cam.focal_px * d.dot(down) / z + 0.5 * cam.height;
  return true;
}

CameraPose camera_pose(const CameraIntrinsics& cam, const BasePose& base) {
  const double cy = std::cos(base.yaw);
  const double sy = std::sin(base.yaw);
  const double cp = std::cos(cam.mount_pitch);
  const double sp = std::sin(cam.mount_pitch);
  CameraPose pose;
  pose.origin = Vec3(base.x, base.y, cam.mount_height);
  pose.forward = Vec3(cp * cy, cp * sy, -sp);
  pose.right = Vec3(sy, -cy, 0.0);
  pose.down = Vec3(-sp * cy, -sp * sy, -cp);
  return pose;
}

World::World(WorldConfig config) : config_(std::move(config)) {
  config_.validate();
  state_.base = config_.start_base;
  state_.base.yaw = wrap_angle(state_.base.yaw);
  state_.joints = config_.start_joints;
  objects_ = config_.objects;
}

const ObjectSpec& World::object(const std::string& id) const {
  for (const auto& o : objects_) {
    if (o.id == id) return o;
  }
  throw Error("unknown object '" + id + "'");
}

bool World::base_collides(const BasePose& pose) const {
  const Vec2 p(pose.x, pose.y);
  if (footprint_distance(p, config_.table) < kBaseRadius) return true;
  for (const auto& b : config_.obstacle_boxes) {
    if (footprint_distance(p, b) < kBaseRadius) return true;
  }
  return false;
}

const RobotState& World::step(const BaseCommand& cmd, const JointVector& joint_target) {
  const double dt = config_.dt;
  const BaseCommand c = cmd.clamped();

  BasePose next = state_.base;
  next.x += c.v * std::cos(state_.base.yaw) * dt;
  next.y += c.v * std::sin(state_.base.yaw) * dt;
  next.yaw = wrap_angle(state_.base.yaw + c.omega * dt);
  if (!base_collides(next)) state_.base = next;

  const JointVector target = clamp_joints(joint_target);
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const double max_delta = kJointRate[i] * dt;
    const double delta = std::clamp(target[i] - state_.joints[i], -max_delta, max_delta);
    state_.joints[i] = std::clamp(state_.joints[i] + delta, kJointMin[i], kJointMax[i]);
  }

  if (state_.attached_object) {
    const Vec3 tip_now = tip();
    for (auto& o : objects_) {
      if (o.id == *state_.attached_object) o.center = tip_now + attach_offset_;
    }
  }
  ++tick_;
  return state_;
}

Vec3 World::tip() const { return tip_position(state_.joints, state_.base); }

bool World::touching() const { return target().box().contains(tip(), kTouchInflation); }

bool World::attach_if_grasping() {
  if (state_.attached_object) return state_.attached_object == config_.target_id;
  if (state_.joints[kGripper] < kGraspAperture && touching()) {
    state_.attached_object = config_.target_id;
    attach_offset_ = target().center - tip();
    return true;
  }
  return false;
}

SensorFrame World::render() const {
  const CameraIntrinsics& cam = config_.camera;
  const CameraPose pose = camera_pose(cam, state_.base);
  const int w = cam.width;
  const int h = cam.height;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);

  SensorFrame frame;
  frame.width = w;
  frame.height = h;
  frame.rgb.assign(n * 3, 0);
  frame.depth.assign(n, 0.0f);
  frame.disparity.assign(n, 0.0f);
  frame.hit.assign(n, SensorFrame::kHitNone);

  std::mt19937_64 rng(mix_seed(config_.rng_seed, tick_));
  std::normal_distribution<double> noise(0.0, 1.0);
  const double sigma = cam.depth_noise_sigma;
  const double fb = cam.focal_px * cam.baseline_m;

  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const std::size_t idx = static_cast<std::size_t>(v) * w + u;
      const double xc = (u + 0.5 - 0.5 * w) / cam.focal_px;
      const double yc = (v + 0.5 - 0.5 * h) / cam.focal_px;
      // Unit forward component, so the hit parameter is the optical-axis depth.
      const Vec3 dir = pose.forward + xc * pose.right + yc * pose.down;

      double best = std::numeric_limits<double>::infinity();
      int hit = SensorFrame::kHitNone;
      Rgb color = Rgb::Zero();

      if (dir.z() < 0.0) {
        const double t = -pose.origin.z() / dir.z();
        const Vec3 p = pose.origin + t * dir;
        if (std::abs(p.x()) <= kFloorHalfSize && std::abs(p.y()) <= kFloorHalfSize) {
          best = t;
          hit = SensorFrame::kHitFloor;
          color = kFloorColor;
        }
      }
      if (const double t = ray_box(pose.origin, dir, config_.table); t < best) {
        best = t;
        hit = SensorFrame::kHitTable;
        color = kTableColor;
      }
      for (const auto& b : config_.obstacle_boxes) {
        if (const double t = ray_box(pose.origin, dir, b); t < best) {
          best = t;
          hit = SensorFrame::kHitObstacle;
          color = kObstacleColor;
        }
      }
      for (std::size_t k = 0; k < objects_.size(); ++k) {
        if (const double t = ray_box(pose.origin, dir, objects_[k].box()); t < best) {
          best = t;
          hit = static_cast<int>(k);
          color = objects_[k].color;
        }
      }
      if (hit == SensorFrame::kHitNone) continue;

      frame.hit[idx] = hit;
      for (int c = 0; c < 3; ++c) frame.rgb[idx * 3 + c] = to_byte(color[c]);

      double depth = best;
      if (sigma > 0.0) depth += sigma * noise(rng);
      const auto depth_f = static_cast<float>(depth);
      if (!(depth_f > 0.0f)) continue;
      frame.depth[idx] = depth_f;
      frame.disparity[idx] = static_cast<float>(fb / static_cast<double>(depth_f));
      const Vec3 p = pose.origin + static_cast<double>(depth_f) * dir;
      frame.cloud.push_back(p, color);
      frame.cloud_pixel.push_back(static_cast<int>(idx));
    }
  }
  return frame;
}

}  // namespace skl::sim
