// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Base motion: A* global planner and pure-pursuit path follower.

#ifndef SKL_EXPERT_PLANNING_HPP_
#define SKL_EXPERT_PLANNING_HPP_

#include <variant>
#include <vector>

#include "skl/expert/grid.hpp"

namespace skl::expert {

struct Path {
  /// Cell centers in world coordinates, start cell first.
  std::vector<Vec2> waypoints;
  std::vector<Cell> cells;
  /// In cell units: 1 per straight move, sqrt(2) per diagonal move.
  double cost = 0.0;
};

/// 8-connected A* with the octile heuristic. Ties on f are broken by the
/// smaller (ix, iy).
/// Throws PlanningError("pose in collision") / PlanningError("unreachable goal").
Path astar(const OccupancyGrid& grid, const Vec2& start, const Vec2& goal);

struct Arrived {};
using FollowResult = std::variant<sim::BaseCommand, Arrived>;

struct PursuitParams {
  double lookahead = 0.3;
  double goal_tol = 0.05;
  double heading_gain = 2.0;
};

/// One pure-pursuit control step toward `path`.
FollowResult follow_path(const sim::BasePose& pose, const Path& path, const PursuitParams& params = {});

}  // namespace skl::expert

#endif  // SKL_EXPERT_PLANNING_HPP_
