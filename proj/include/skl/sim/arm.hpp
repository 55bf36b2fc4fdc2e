// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Geometry of the planar three-pitch arm mounted on the lift. The arm moves
// in the vertical plane through the base origin along the base heading.

#ifndef SKL_SIM_ARM_HPP_
#define SKL_SIM_ARM_HPP_

#include "skl/sim/types.hpp"

namespace skl::sim {

struct ArmGeometry {
  static constexpr double kShoulderForward = 0.10;
  static constexpr double kShoulderHeight = 0.60;
  static constexpr double kLink1 = 0.30;
  static constexpr double kLink2 = 0.30;
  static constexpr double kTipLink = 0.15;
  static constexpr double kReach = kLink1 + kLink2 + kTipLink;
};

struct ArmPoints {
  Vec3 shoulder;
  Vec3 elbow;
  Vec3 wrist;
  Vec3 tip;
};

/// Closed-form forward kinematics for every joint point of the chain.
ArmPoints arm_points(const JointVector& q, const BasePose& base);

inline Vec3 tip_position(const JointVector& q, const BasePose& base) {
  return arm_points(q, base).tip;
}

}  // namespace skl::sim

#endif  // SKL_SIM_ARM_HPP_
