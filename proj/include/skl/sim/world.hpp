// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SKL_SIM_WORLD_HPP_
#define SKL_SIM_WORLD_HPP_

#include <cstdint>
#include <vector>

#include "skl/sim/types.hpp"

namespace skl::sim {

/// Rendered sensor output for one tick. Images are row-major, origin top-left.
struct SensorFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // width*height*3
  std::vector<float> depth;       // meters along the optical axis, 0 = no hit
  std::vector<float> disparity;   // f*B/depth, 0 where depth is 0
  PointCloud cloud;               // one point per finite-depth pixel, world frame
  /// Source pixel index of every cloud point.
  std::vector<int> cloud_pixel;
  /// What each pixel hit: kHitNone, kHitFloor, kHitTable, kHitObstacle, or an
  /// index into the world's object list.
  std::vector<int> hit;

  static constexpr int kHitNone = -1;
  static constexpr int kHitFloor = -2;
  static constexpr int kHitTable = -3;
  static constexpr int kHitObstacle = -4;
};

/// Pinhole camera pose in world coordinates for a given base pose.
struct CameraPose {
  Vec3 origin;
  Vec3 forward;
  Vec3 right;
  Vec3 down;

  /// Projects a world point to continuous pixel coordinates (u, v); returns
  /// false when the point is behind the camera.
  bool project(const Vec3& p, const CameraIntrinsics& cam, double& u, double& v) const;
};

CameraPose camera_pose(const CameraIntrinsics& cam, const BasePose& base);

/// Deterministic kinematic world. Owned by one execution context at a time.
class World {
 public:
  explicit World(WorldConfig config);

  [[nodiscard]] const WorldConfig& config() const { return config_; }
  [[nodiscard]] const RobotState& state() const { return state_; }
  [[nodiscard]] std::uint64_t tick() const { return tick_; }
  /// Objects with their current poses (attached objects move with the tip).
  [[nodiscard]] const std::vector<ObjectSpec>& objects() const { return objects_; }
  [[nodiscard]] const ObjectSpec& object(const std::string& id) const;
  [[nodiscard]] const ObjectSpec& target() const { return object(config_.target_id); }

  /// Advances one tick. Commands are clamped; joint targets are clamped to the
  /// limits and tracked under the per-joint rate limits.
  const RobotState& step(const BaseCommand& cmd, const JointVector& joint_target);

  /// Renders the current scene. Depth noise is seeded from (rng_seed, tick), so
  /// rendering the same tick twice yields identical frames.
  [[nodiscard]] SensorFrame render() const;

  [[nodiscard]] Vec3 tip() const;
  /// True iff the gripper tip lies inside the target box inflated by 2 cm.
  [[nodiscard]] bool touching() const;
  /// Attaches the target when the gripper is closed below 0.3 while touching.
  bool attach_if_grasping();
  /// True when the base footprint at `pose` overlaps the table or an obstacle.
  [[nodiscard]] bool base_collides(const BasePose& pose) const;

 private:
  WorldConfig config_;
  RobotState state_;
  std::vector<ObjectSpec> objects_;
  Vec3 attach_offset_ = Vec3::Zero();
  std::uint64_t tick_ = 0;
};

}  // namespace skl::sim

#endif  // SKL_SIM_WORLD_HPP_
