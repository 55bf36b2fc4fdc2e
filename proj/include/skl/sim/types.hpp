// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Value types describing the simulated scene and the mobile manipulator.

#ifndef SKL_SIM_TYPES_HPP_
#define SKL_SIM_TYPES_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skl/perception/point_cloud.hpp"

namespace skl::sim {

using Vec2 = Eigen::Vector2d;

/// Joint vector layout: [torso_lift, q1, q2, q3, gripper].
inline constexpr std::size_t kNumJoints = 5;
using JointVector = std::array<double, kNumJoints>;

enum JointIndex : std::size_t { kTorso = 0, kQ1 = 1, kQ2 = 2, kQ3 = 3, kGripper = 4 };

inline constexpr JointVector kJointMin = {0.0, -2.0, -2.0, -2.0, 0.0};
inline constexpr JointVector kJointMax = {0.35, 2.0, 2.0, 2.0, 1.0};
/// Per-second rate limits (m/s for the lift, rad/s for the pitches, 1/s for the gripper).
inline constexpr JointVector kJointRate = {0.1, 0.5, 0.5, 0.5, 2.0};

inline constexpr double kMaxLinearSpeed = 0.5;
inline constexpr double kMaxAngularSpeed = 1.0;
/// Footprint radius used for base/obstacle collision in the simulator.
inline constexpr double kBaseRadius = 0.25;
inline constexpr double kTouchInflation = 0.02;
inline constexpr double kGraspAperture = 0.3;

JointVector clamp_joints(const JointVector& q);
bool within_limits(const JointVector& q, double slack = 0.0);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

struct Box {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Constant(0.1);

  [[nodiscard]] Vec3 min() const { return center - half_extents; }
  [[nodiscard]] Vec3 max() const { return center + half_extents; }
  /// Closed containment test against the box grown by `inflate` on every face.
  [[nodiscard]] bool contains(const Vec3& p, double inflate = 0.0) const;
  /// Open containment test (points on the surface are outside).
  [[nodiscard]] bool strictly_contains(const Vec3& p) const;
};

struct ObjectSpec {
  std::string id;
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Constant(0.03);
  Rgb color = Rgb(0.9, 0.1, 0.1);

  [[nodiscard]] Box box() const { return {center, half_extents}; }
};

struct CameraIntrinsics {
  int width = 64;
  int height = 64;
  double focal_px = 60.0;
  double baseline_m = 0.08;
  /// Mount pose relative to the base origin.
  double mount_height = 1.1;
  double mount_pitch = 0.6;
  /// Standard deviation of the additive depth noise; 0 disables it.
  double depth_noise_sigma = 0.002;
};

struct BasePose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;

  friend bool operator==(const BasePose&, const BasePose&) = default;
};

struct BaseCommand {
  double v = 0.0;
  double omega = 0.0;

  [[nodiscard]] BaseCommand clamped() const;
  friend bool operator==(const BaseCommand&, const BaseCommand&) = default;
};

struct RobotState {
  BasePose base;
  JointVector joints = {0.0, 0.0, 0.0, 0.0, 1.0};
  std::optional<std::string> attached_object;

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

struct WorldConfig {
  Box table{Vec3(1.35, 0.0, 0.2), Vec3(0.25, 0.4, 0.2)};
  std::vector<ObjectSpec> objects;
  std::vector<Box> obstacle_boxes;
  CameraIntrinsics camera;
  std::uint64_t rng_seed = 0;
  double dt = 0.1;
  /// Initial robot configuration.
  BasePose start_base;
  JointVector start_joints = {0.15, 1.0, -1.8, -0.6, 1.0};
  /// Object used by the touch and grasp predicates.
  std::string target_id;

  /// Throws skl::Error when an invariant is violated.
  void validate() const;
  [[nodiscard]] const ObjectSpec& object(const std::string& id) const;
};

inline const Rgb kFloorColor(0.5, 0.5, 0.5);
inline const Rgb kTableColor(0.55, 0.35, 0.2);
inline const Rgb kObstacleColor(0.3, 0.3, 0.4);

/// Ten object colors, pairwise >= 0.3 apart and >= 0.3 from every background color.
const std::array<Rgb, 10>& object_palette();

}  // namespace skl::sim

#endif  // SKL_SIM_TYPES_HPP_
