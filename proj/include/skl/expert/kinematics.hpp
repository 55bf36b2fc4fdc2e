// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SKL_EXPERT_KINEMATICS_HPP_
#define SKL_EXPERT_KINEMATICS_HPP_

#include <Eigen/Core>
#include <vector>

#include "skl/sim/types.hpp"

namespace skl::sim {
class World;
}

namespace skl::expert {

using sim::JointVector;

/// Gripper tip in world coordinates.
Vec3 fk(const JointVector& joints, const sim::BasePose& base);

/// d tip / d (torso, q1, q2, q3).
Eigen::Matrix<double, 3, 4> tip_jacobian(const JointVector& joints, const sim::BasePose& base);

struct IkOptions {
  double tol = 1e-3;
  int max_iter = 100;
  double damping = 0.1;
  /// Iterations granted to each start before moving to the next fallback.
  int restart_iter = 25;
  /// Allowed excess over the nominal chain length in the reach test.
  double reach_slack = 0.005;
};

struct IkResult {
  JointVector joints{};
  int iterations = 0;
  double residual = 0.0;
};

/// Damped least squares over (torso, q1, q2, q3); the gripper keeps its seed
/// value. When the seed stalls, a few fixed starting poses are tried within the
/// same max_iter budget. Throws PlanningError("unreachable target") when the target is off
/// the arm plane, beyond reach or below the floor, and PlanningError("ik
/// failed") when max_iter updates do not bring the residual under tol.
IkResult ik(const Vec3& target, const JointVector& seed, const sim::BasePose& base, const IkOptions& options = {});

struct ArmPlan {
  std::vector<JointVector> joint_waypoints;
  std::vector<bool> collision_free;
};

/// Largest joint change between consecutive arm waypoints.
inline constexpr JointVector kArmPlanStep = {0.01, 0.05, 0.05, 0.05, 0.2};

/// True when the elbow, wrist or tip of `q` lies inside an obstacle, the
/// table, a non-target object or below the floor.
bool arm_in_collision(const JointVector& q, const sim::World& world);

/// Joint-space linear interpolation with every waypoint collision-checked.
/// Throws PlanningError("arm plan in collision").
ArmPlan plan_arm(const JointVector& q_start, const JointVector& q_goal, const sim::World& world);

}  // namespace skl::expert

#endif  // SKL_EXPERT_KINEMATICS_HPP_
