// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/expert/grid.hpp"

#include <cmath>

#include "skl/common/error.hpp"

namespace skl::expert {

OccupancyGrid::OccupancyGrid(double resolution, Vec2 origin, int width, int height, std::vector<bool> raw,
                             double inflation)
    : resolution_(resolution), origin_(std::move(origin)), width_(width), height_(height) {
  if (!(resolution > 0.0)) throw Error("occupancy grid: resolution must be positive");
  if (width <= 0 || height <= 0) throw Error("occupancy grid: empty raster");
  if (raw.size() != static_cast<std::size_t>(width) * height) throw Error("occupancy grid: raster size mismatch");
  if (inflation < 0.0) throw Error("occupancy grid: negative inflation");

  cells_ = raw;
  const int r = static_cast<int>(std::floor(inflation / resolution + 1e-9));
  if (r == 0) return;
  const double limit = inflation / resolution + 1e-9;
  for (int iy = 0; iy < height; ++iy) {
    for (int ix = 0; ix < width; ++ix) {
      if (!raw[static_cast<std::size_t>(iy) * width + ix]) continue;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          if (std::hypot(dx, dy) > limit) continue;
          const int x = ix + dx;
          const int y = iy + dy;
          if (x < 0 || y < 0 || x >= width || y >= height) continue;
          cells_[static_cast<std::size_t>(y) * width + x] = true;
        }
      }
    }
  }
}

OccupancyGrid OccupancyGrid::from_world(const sim::WorldConfig& world, Vec2 center, double half_size,
                                        double resolution, double inflation) {
  const int n = static_cast<int>(std::ceil(2.0 * half_size / resolution));
  const Vec2 origin = center - Vec2(half_size, half_size);
  std::vector<bool> raw(static_cast<std::size_t>(n) * n, false);
  auto mark = [&](const sim::Box& b) {
    // Every cell overlapping the footprint rectangle.
    const Vec2 lo = (Vec2(b.min().x(), b.min().y()) - origin) / resolution;
    const Vec2 hi = (Vec2(b.max().x(), b.max().y()) - origin) / resolution;
    for (int iy = std::max(0, static_cast<int>(std::floor(lo.y()))); iy <= std::min(n - 1, static_cast<int>(std::floor(hi.y()))); ++iy) {
      for (int ix = std::max(0, static_cast<int>(std::floor(lo.x()))); ix <= std::min(n - 1, static_cast<int>(std::floor(hi.x()))); ++ix) {
        raw[static_cast<std::size_t>(iy) * n + ix] = true;
      }
    }
  };
  mark(world.table);
  for (const auto& b : world.obstacle_boxes) mark(b);
  return OccupancyGrid(resolution, origin, n, n, std::move(raw), inflation);
}

bool OccupancyGrid::occupied(Cell c) const {
  if (!in_bounds(c)) return true;
  return cells_[static_cast<std::size_t>(c.iy) * width_ + c.ix];
}

Cell OccupancyGrid::cell_of(const Vec2& p) const {
  const Vec2 rel = (p - origin_) / resolution_;
  return {static_cast<int>(std::floor(rel.x())), static_cast<int>(std::floor(rel.y()))};
}

Vec2 OccupancyGrid::center_of(Cell c) const {
  return origin_ + resolution_ * Vec2(c.ix + 0.5, c.iy + 0.5);
}

}  // namespace skl::expert
