// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SKL_EXPERT_GRID_HPP_
#define SKL_EXPERT_GRID_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "skl/sim/types.hpp"

namespace skl::expert {

using sim::Vec2;

struct Cell {
  int ix = 0;
  int iy = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// 2D obstacle raster. Occupied cells are inflated by `inflation` meters once,
/// at construction: every cell whose center lies within that distance of an
/// occupied cell center becomes occupied.
class OccupancyGrid {
 public:
  static constexpr double kDefaultResolution = 0.05;
  static constexpr double kRobotRadius = 0.3;

  /// `raw` is row-major by iy (raw[iy * width + ix]), true = occupied.
  OccupancyGrid(double resolution, Vec2 origin, int width, int height, std::vector<bool> raw,
                double inflation = kRobotRadius);

  /// Rasterizes the table and obstacle footprints of a scene over the square
  /// region [center - half_size, center + half_size].
  static OccupancyGrid from_world(const sim::WorldConfig& world, Vec2 center, double half_size,
                                  double resolution = kDefaultResolution, double inflation = kRobotRadius);

  [[nodiscard]] double resolution() const { return resolution_; }
  [[nodiscard]] const Vec2& origin() const { return origin_; }
  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }

  [[nodiscard]] bool in_bounds(Cell c) const { return c.ix >= 0 && c.iy >= 0 && c.ix < width_ && c.iy < height_; }
  /// Out-of-bounds cells count as occupied.
  [[nodiscard]] bool occupied(Cell c) const;
  [[nodiscard]] Cell cell_of(const Vec2& p) const;
  [[nodiscard]] Vec2 center_of(Cell c) const;

 private:
  double resolution_;
  Vec2 origin_;
  int width_;
  int height_;
  std::vector<bool> cells_;
};

}  // namespace skl::expert

#endif  // SKL_EXPERT_GRID_HPP_
