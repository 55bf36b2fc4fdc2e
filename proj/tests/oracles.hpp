// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deliberately naive reference implementations shared by the unit tests and
// the acceptance runner. They trade speed for obviousness.

#ifndef SKL_TESTS_ORACLES_HPP_
#define SKL_TESTS_ORACLES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "skl/dataset/episode.hpp"
#include "skl/expert/grid.hpp"
#include "skl/perception/point_cloud.hpp"
#include "skl/sim/world.hpp"

namespace skl::oracle {

/// Float-representable random cloud: a dense blob of `n` points in a cube of
/// side `extent`, with a fraction `outliers` scattered ten times wider.
inline PointCloud random_cloud(std::uint64_t seed, std::size_t n, double extent, double outliers = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = u(rng) < outliers ? 10.0 * extent : extent;
    Vec3 p;
    Rgb col;
    for (int k = 0; k < 3; ++k) {
      p[k] = static_cast<float>((u(rng) - 0.5) * scale);
      col[k] = static_cast<float>(u(rng));
    }
    c.push_back(p, col);
  }
  return c;
}

/// Voxel grid by explicit grouping: a linear search over a list of buckets,
/// then a sort of the bucket keys.
inline PointCloud voxel_grid(const PointCloud& cloud, double leaf) {
  struct Bucket {
    std::array<long long, 3> key;
    std::vector<std::size_t> members;
  };
  std::vector<Bucket> buckets;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    std::array<long long, 3> key{};
    for (int k = 0; k < 3; ++k) key[k] = static_cast<long long>(std::floor(cloud.points[i].position[k] / leaf));
    auto it = std::find_if(buckets.begin(), buckets.end(), [&](const Bucket& b) { return b.key == key; });
    if (it == buckets.end()) {
      buckets.push_back({key, {i}});
    } else {
      it->members.push_back(i);
    }
  }
  std::sort(buckets.begin(), buckets.end(), [](const Bucket& a, const Bucket& b) { return a.key < b.key; });
  PointCloud out;
  for (const auto& b : buckets) {
    Vec3 p = Vec3::Zero();
    Rgb c = Rgb::Zero();
    for (std::size_t i : b.members) {
      p += cloud.points[i].position;
      c += cloud.points[i].color;
    }
    out.push_back(p / static_cast<double>(b.members.size()), c / static_cast<double>(b.members.size()));
  }
  return out;
}

/// O(n^2 log n) statistical outlier removal with full sorts.
inline PointCloud sor(const PointCloud& cloud, std::size_t k, double alpha) {
  const std::size_t n = cloud.size();
  std::vector<double> mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) d.emplace_back((cloud.points[i].position - cloud.points[j].position).norm(), j);
    }
    std::sort(d.begin(), d.end());
    double s = 0;
    for (std::size_t q = 0; q < k; ++q) s += d[q].first;
    mean[i] = s / static_cast<double>(k);
  }
  double mu = 0;
  for (double m : mean) mu += m;
  mu /= static_cast<double>(n);
  double var = 0;
  for (double m : mean) var += (m - mu) * (m - mu);
  const double limit = mu + alpha * std::sqrt(var / static_cast<double>(n));
  PointCloud out;
  for (std::size_t i = 0; i < n; ++i) {
    if (mean[i] <= limit) out.points.push_back(cloud.points[i]);
  }
  return out;
}

/// Square grid of unit cells with each cell blocked independently.
inline expert::OccupancyGrid random_grid(std::mt19937_64& rng, int n, double density) {
  std::bernoulli_distribution occ(density);
  std::vector<bool> raw(static_cast<std::size_t>(n * n));
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = occ(rng);
  return expert::OccupancyGrid(1.0, sim::Vec2(0, 0), n, n, raw, 0.0);
}

inline expert::Cell random_free(std::mt19937_64& rng, const expert::OccupancyGrid& g) {
  std::uniform_int_distribution<int> u(0, g.width() - 1);
  for (;;) {
    const expert::Cell c{u(rng), u(rng)};
    if (!g.occupied(c)) return c;
  }
}

/// Mean of the noiseless surface points that the renderer attributes to the
/// scene's target object.
inline Vec3 visible_centroid(sim::WorldConfig scene) {
  scene.camera.depth_noise_sigma = 0.0;
  const sim::World world(scene);
  const sim::SensorFrame frame = world.render();
  const auto& objects = world.objects();
  const auto it = std::find_if(objects.begin(), objects.end(),
                               [&](const sim::ObjectSpec& o) { return o.id == scene.target_id; });
  const int target = static_cast<int>(it - objects.begin());
  Vec3 sum = Vec3::Zero();
  int n = 0;
  for (std::size_t i = 0; i < frame.cloud.size(); ++i) {
    if (frame.hit[static_cast<std::size_t>(frame.cloud_pixel[i])] != target) continue;
    sum += frame.cloud.points[i].position;
    ++n;
  }
  return n == 0 ? Vec3::Constant(std::numeric_limits<double>::quiet_NaN()) : Vec3(sum / n);
}

/// Dijkstra over the 8-connected grid with O(V^2) node selection. Returns the
/// path cost in cell units, or +inf when unreachable.
inline double dijkstra(const expert::OccupancyGrid& g, expert::Cell s, expert::Cell t) {
  const int w = g.width(), h = g.height();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(w * h), inf);
  std::vector<bool> done(dist.size(), false);
  if (g.occupied(s) || g.occupied(t)) return inf;
  dist[static_cast<std::size_t>(s.iy * w + s.ix)] = 0;
  for (;;) {
    std::size_t best = dist.size();
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (!done[i] && dist[i] < inf && (best == dist.size() || dist[i] < dist[best])) best = i;
    }
    if (best == dist.size()) return inf;
    done[best] = true;
    const int bx = static_cast<int>(best) % w, by = static_cast<int>(best) / w;
    if (bx == t.ix && by == t.iy) return dist[best];
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const expert::Cell n{bx + dx, by + dy};
        if (g.occupied(n)) continue;
        const double step = (dx != 0 && dy != 0) ? std::sqrt(2.0) : 1.0;
        auto& dn = dist[static_cast<std::size_t>(n.iy * w + n.ix)];
        dn = std::min(dn, dist[best] + step);
      }
    }
  }
}

/// Min/max of every state dimension by direct loops over the steps.
inline std::pair<std::vector<double>, std::vector<double>> state_range(const std::vector<dataset::Episode>& eps) {
  const std::size_t dim = 5 + (eps.front().steps.front().base_cmd ? 2 : 0);
  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  for (const auto& ep : eps) {
    for (const auto& s : ep.steps) {
      for (std::size_t i = 0; i < dim; ++i) {
        const double v = i < 5 ? s.state[i] : (*s.base_cmd)[i - 5];
        lo[i] = std::min(lo[i], v);
        hi[i] = std::max(hi[i], v);
      }
    }
  }
  return {lo, hi};
}

/// Two-pass mean and population standard deviation.
inline std::pair<double, double> mean_std(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return {m, std::sqrt(s / static_cast<double>(v.size()))};
}

inline double mse(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace skl::oracle

#endif  // SKL_TESTS_ORACLES_HPP_
