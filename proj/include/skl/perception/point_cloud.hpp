// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SKL_PERCEPTION_POINT_CLOUD_HPP_
#define SKL_PERCEPTION_POINT_CLOUD_HPP_

#include <Eigen/Core>
#include <vector>

namespace skl {

using Vec3 = Eigen::Vector3d;
using Rgb = Eigen::Vector3d;

struct CloudPoint {
  Vec3 position = Vec3::Zero();
  Rgb color = Rgb::Zero();

  friend bool operator==(const CloudPoint& a, const CloudPoint& b) {
    return a.position == b.position && a.color == b.color;
  }
};

/// Colored 3D points in world coordinates. May be empty.
struct PointCloud {
  std::vector<CloudPoint> points;

  [[nodiscard]] std::size_t size() const { return points.size(); }
  [[nodiscard]] bool empty() const { return points.empty(); }
  void push_back(const Vec3& p, const Rgb& c) { points.push_back({p, c}); }

  friend bool operator==(const PointCloud& a, const PointCloud& b) { return a.points == b.points; }
};

}  // namespace skl

#endif  // SKL_PERCEPTION_POINT_CLOUD_HPP_
