// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/perception/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "skl/common/error.hpp"
#include "skl/sim/world.hpp"

namespace skl::perception {

void PerceptionParams::validate() const {
  if (!(leaf > 0.0)) throw Error("perception: leaf must be positive");
  if (k_neighbors < 1) throw Error("perception: k_neighbors must be >= 1");
  if (!(alpha >= 0.0)) throw Error("perception: alpha must be non-negative");
  if (!(color_threshold > 0.0 && color_threshold <= std::sqrt(3.0))) {
    throw Error("perception: color_threshold must lie in (0, sqrt(3)]");
  }
}

PointCloud voxel_grid_filter(const PointCloud& cloud, double leaf) {
  if (!(leaf > 0.0)) throw Error("voxel_grid_filter: leaf must be positive");
  struct Accum {
    Vec3 position = Vec3::Zero();
    Rgb color = Rgb::Zero();
    std::size_t count = 0;
  };
  // Sum members in input-index order so a voxel's mean is independent of how
  // other voxels are interleaved.
  std::map<std::array<std::int64_t, 3>, Accum> voxels;
  for (const auto& pt : cloud.points) {
    std::array<std::int64_t, 3> key{};
    for (int i = 0; i < 3; ++i) key[i] = static_cast<std::int64_t>(std::floor(pt.position[i] / leaf));
    auto& acc = voxels[key];
    acc.position += pt.position;
    acc.color += pt.color;
    ++acc.count;
  }
  PointCloud out;
  out.points.reserve(voxels.size());
  for (const auto& [key, acc] : voxels) {
    const double n = static_cast<double>(acc.count);
    out.push_back(acc.position / n, acc.color / n);
  }
  return out;
}

std::vector<double> mean_knn_distances(const PointCloud& cloud, std::size_t k) {
  const std::size_t n = cloud.size();
  if (n <= k) throw PerceptionError("insufficient points for k-NN");
  std::vector<double> mean_dist(n, 0.0);
  std::vector<std::pair<double, std::size_t>> dists(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t m = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      dists[m++] = {(cloud.points[i].position - cloud.points[j].position).norm(), j};
    }
    // Pairs compare by (distance, index): ties resolve to the lower input index.
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k - 1), dists.end());
    std::sort(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k));
    double sum = 0.0;
    for (std::size_t q = 0; q < k; ++q) sum += dists[q].first;
    mean_dist[i] = sum / static_cast<double>(k);
  }
  return mean_dist;
}

PointCloud statistical_outlier_removal(const PointCloud& cloud, std::size_t k, double alpha) {
  if (k < 1) throw Error("statistical_outlier_removal: k must be >= 1");
  const std::vector<double> d = mean_knn_distances(cloud, k);
  const double n = static_cast<double>(d.size());
  const double mu = std::accumulate(d.begin(), d.end(), 0.0) / n;
  double var = 0.0;
  for (double di : d) var += (di - mu) * (di - mu);
  const double sigma = std::sqrt(var / n);
  const double threshold = mu + alpha * sigma;

  PointCloud out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] <= threshold) out.points.push_back(cloud.points[i]);
  }
  return out;
}

PointCloud color_segment(const PointCloud& cloud, const Rgb& target, double threshold) {
  if (!(threshold > 0.0)) throw Error("color_segment: threshold must be positive");
  PointCloud out;
  for (const auto& pt : cloud.points) {
    if ((pt.color - target).norm() <= threshold) out.points.push_back(pt);
  }
  return out;
}

Vec3 centroid(const PointCloud& cloud) {
  if (cloud.empty()) throw PerceptionError("object not found");
  Vec3 sum = Vec3::Zero();
  for (const auto& pt : cloud.points) sum += pt.position;
  return sum / static_cast<double>(cloud.size());
}

Vec3 locate_object(const sim::SensorFrame& frame, const Rgb& target_color, const PerceptionParams& params) {
  params.validate();
  const PointCloud voxels = voxel_grid_filter(frame.cloud, params.leaf);
  const PointCloud inliers = statistical_outlier_removal(voxels, params.k_neighbors, params.alpha);
  return centroid(color_segment(inliers, target_color, params.color_threshold));
}

}  // namespace skl::perception
