// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Object localization: voxel grid downsample, statistical outlier removal,
// color segmentation, centroid. All functions are pure.

#ifndef SKL_PERCEPTION_FILTERS_HPP_
#define SKL_PERCEPTION_FILTERS_HPP_

#include <cstddef>

#include "skl/perception/point_cloud.hpp"

namespace skl::sim {
struct SensorFrame;
}

namespace skl::perception {

struct PerceptionParams {
  double leaf = 0.01;
  std::size_t k_neighbors = 8;
  double alpha = 1.0;
  double color_threshold = 0.25;

  /// Throws skl::Error on out-of-range values.
  void validate() const;
};

/// One point per occupied voxel (index floor(p / leaf) per axis): the mean of
/// member positions and colors. Output sorted by (ix, iy, iz).
PointCloud voxel_grid_filter(const PointCloud& cloud, double leaf);

/// Mean distance from every point to its k nearest neighbors, exact brute
/// force. Exposed for diagnostics.
std::vector<double> mean_knn_distances(const PointCloud& cloud, std::size_t k);

/// Keeps points whose mean kNN distance is <= mu + alpha * sigma (population
/// statistics over the cloud). Input order is preserved.
/// Throws PerceptionError("insufficient points for k-NN") when size <= k.
PointCloud statistical_outlier_removal(const PointCloud& cloud, std::size_t k, double alpha);

PointCloud color_segment(const PointCloud& cloud, const Rgb& target, double threshold);

/// Throws PerceptionError("object not found") on an empty cloud.
Vec3 centroid(const PointCloud& cloud);

/// centroid(color_segment(statistical_outlier_removal(voxel_grid_filter(...)))).
Vec3 locate_object(const sim::SensorFrame& frame, const Rgb& target_color, const PerceptionParams& params);

}  // namespace skl::perception

#endif  // SKL_PERCEPTION_FILTERS_HPP_
