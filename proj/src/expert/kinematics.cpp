// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/expert/kinematics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "skl/common/error.hpp"
#include "skl/sim/arm.hpp"
#include "skl/sim/world.hpp"

namespace skl::expert {

using sim::ArmGeometry;

Vec3 fk(const JointVector& joints, const sim::BasePose& base) { return sim::tip_position(joints, base); }

Eigen::Matrix<double, 3, 4> tip_jacobian(const JointVector& q, const sim::BasePose& base) {
  const double a1 = q[sim::kQ1];
  const double a2 = a1 + q[sim::kQ2];
  const double a3 = a2 + q[sim::kQ3];
  const double l1 = ArmGeometry::kLink1;
  const double l2 = ArmGeometry::kLink2;
  const double l3 = ArmGeometry::kTipLink;

  // In-plane partials (horizontal h, vertical z) for q3, q2, q1.
  const double dh3 = -l3 * std::sin(a3);
  const double dz3 = l3 * std::cos(a3);
  const double dh2 = dh3 - l2 * std::sin(a2);
  const double dz2 = dz3 + l2 * std::cos(a2);
  const double dh1 = dh2 - l1 * std::sin(a1);
  const double dz1 = dz2 + l1 * std::cos(a1);

  const double c = std::cos(base.yaw);
  const double s = std::sin(base.yaw);
  Eigen::Matrix<double, 3, 4> j;
  j << 0.0, c * dh1, c * dh2, c * dh3,
       0.0, s * dh1, s * dh2, s * dh3,
       1.0, dz1, dz2, dz3;
  return j;
}

namespace {

constexpr JointVector kIkRestarts[] = {
    {0.175, 1.5, 0.5, 0.0, 0.0},
    {0.175, 0.3, 1.5, 0.3, 0.0},
    {0.175, -0.8, 0.8, -0.8, 0.0},
};

void check_reachable(const Vec3& target, const sim::BasePose& base, const IkOptions& opt) {
  const double c = std::cos(base.yaw);
  const double s = std::sin(base.yaw);
  const double dx = target.x() - base.x;
  const double dy = target.y() - base.y;
  const double along = c * dx + s * dy;
  const double lateral = -s * dx + c * dy;
  if (std::abs(lateral) > opt.tol || target.z() < 0.0) throw PlanningError("unreachable target");

  // Distance to the nearest shoulder position along the lift stroke.
  const double z_lo = ArmGeometry::kShoulderHeight + sim::kJointMin[sim::kTorso];
  const double z_hi = ArmGeometry::kShoulderHeight + sim::kJointMax[sim::kTorso];
  const double dz = target.z() - std::clamp(target.z(), z_lo, z_hi);
  const double dh = along - ArmGeometry::kShoulderForward;
  if (std::hypot(dh, dz) > ArmGeometry::kReach + opt.reach_slack) throw PlanningError("unreachable target");
}

}  // namespace

IkResult ik(const Vec3& target, const JointVector& seed, const sim::BasePose& base, const IkOptions& opt) {
  check_reachable(target, base, opt);

  // Fallback starts for when the caller's seed settles in a local minimum.
  // The gripper value always comes from the caller.
  std::vector<JointVector> starts = {seed, kIkRestarts[0], kIkRestarts[1], kIkRestarts[2]};
  for (auto& s : starts) s[sim::kGripper] = seed[sim::kGripper];

  const double lambda2 = opt.damping * opt.damping;
  IkResult result;
  int used = 0;
  for (std::size_t attempt = 0; attempt < starts.size() && used <= opt.max_iter; ++attempt) {
    const bool last = attempt + 1 == starts.size();
    const int budget = last ? opt.max_iter - used : std::min(opt.restart_iter, opt.max_iter - used);
    result.joints = sim::clamp_joints(starts[attempt]);
    for (int it = 0;; ++it) {
      const Vec3 error = target - fk(result.joints, base);
      result.residual = error.norm();
      result.iterations = used + it;
      if (result.residual < opt.tol) return result;
      if (it >= budget) break;

      // Joints pinned at a limit and pushed outward drop out of the solve.
      Eigen::Matrix<double, 3, 4> j = tip_jacobian(result.joints, base);
      Eigen::Vector4d dq;
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::Matrix3d jjt = j * j.transpose() + lambda2 * Eigen::Matrix3d::Identity();
        dq = j.transpose() * jjt.ldlt().solve(error);
        bool pinned = false;
        for (int k = 0; k < 4; ++k) {
          const auto uk = static_cast<std::size_t>(k);
          const bool at_min = result.joints[uk] <= sim::kJointMin[uk] && dq[k] < 0.0;
          const bool at_max = result.joints[uk] >= sim::kJointMax[uk] && dq[k] > 0.0;
          if ((at_min || at_max) && !j.col(k).isZero()) {
            j.col(k).setZero();
            pinned = true;
          }
        }
        if (!pinned) break;
      }
      for (int k = 0; k < 4; ++k) result.joints[static_cast<std::size_t>(k)] += dq[k];
      result.joints = sim::clamp_joints(result.joints);
    }
    used += budget;
    if (last) break;
  }
  throw PlanningError("ik failed");
}

bool arm_in_collision(const JointVector& q, const sim::World& world) {
  const sim::ArmPoints pts = sim::arm_points(q, world.state().base);
  const auto& cfg = world.config();
  const auto& attached = world.state().attached_object;
  for (const Vec3* p : {&pts.elbow, &pts.wrist, &pts.tip}) {
    if (p->z() < 0.0) return true;
    if (cfg.table.strictly_contains(*p)) return true;
    for (const auto& b : cfg.obstacle_boxes) {
      if (b.strictly_contains(*p)) return true;
    }
    for (const auto& o : world.objects()) {
      if (o.id == cfg.target_id || (attached && o.id == *attached)) continue;
      if (o.box().strictly_contains(*p)) return true;
    }
  }
  return false;
}

ArmPlan plan_arm(const JointVector& q_start, const JointVector& q_goal, const sim::World& world) {
  if (!sim::within_limits(q_start, 1e-9) || !sim::within_limits(q_goal, 1e-9)) {
    throw PlanningError("arm plan endpoints out of joint limits");
  }
  std::size_t steps = 0;
  for (std::size_t i = 0; i < sim::kNumJoints; ++i) {
    const double ratio = std::abs(q_goal[i] - q_start[i]) / kArmPlanStep[i];
    steps = std::max(steps, static_cast<std::size_t>(std::ceil(ratio - 1e-9)));
  }
  ArmPlan plan;
  plan.joint_waypoints.reserve(steps + 1);
  plan.joint_waypoints.push_back(q_start);
  plan.collision_free.push_back(true);
  for (std::size_t k = 1; k <= steps; ++k) {
    JointVector q{};
    if (k == steps) {
      q = q_goal;
    } else {
      const double t = static_cast<double>(k) / static_cast<double>(steps);
      for (std::size_t i = 0; i < sim::kNumJoints; ++i) q[i] = q_start[i] + t * (q_goal[i] - q_start[i]);
    }
    if (arm_in_collision(q, world)) throw PlanningError("arm plan in collision");
    plan.joint_waypoints.push_back(q);
    plan.collision_free.push_back(true);
  }
  return plan;
}

}  // namespace skl::expert
