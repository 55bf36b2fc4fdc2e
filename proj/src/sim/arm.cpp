// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/sim/arm.hpp"

#include <cmath>

namespace skl::sim {

ArmPoints arm_points(const JointVector& q, const BasePose& base) {
  using G = ArmGeometry;
  const double c = std::cos(base.yaw);
  const double s = std::sin(base.yaw);
  // Point at horizontal offset `h` along the heading and height `z`.
  auto in_plane = [&](double h, double z) {
    return Vec3(base.x + c * h, base.y + s * h, z);
  };

  const double a1 = q[kQ1];
  const double a2 = a1 + q[kQ2];
  const double a3 = a2 + q[kQ3];

  double h = G::kShoulderForward;
  double z = G::kShoulderHeight + q[kTorso];
  ArmPoints pts;
  pts.shoulder = in_plane(h, z);
  h += G::kLink1 * std::cos(a1);
  z += G::kLink1 * std::sin(a1);
  pts.elbow = in_plane(h, z);
  h += G::kLink2 * std::cos(a2);
  z += G::kLink2 * std::sin(a2);
  pts.wrist = in_plane(h, z);
  h += G::kTipLink * std::cos(a3);
  z += G::kTipLink * std::sin(a3);
  pts.tip = in_plane(h, z);
  return pts;
}

}  // namespace skl::sim
