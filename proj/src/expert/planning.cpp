// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/expert/planning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

#include "skl/common/error.hpp"

namespace skl::expert {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double octile(Cell a, Cell b) {
  const double dx = std::abs(a.ix - b.ix);
  const double dy = std::abs(a.iy - b.iy);
  return (dx + dy) + (kSqrt2 - 2.0) * std::min(dx, dy);
}

struct OpenEntry {
  double f;
  Cell cell;
  // Min-heap on (f, ix, iy).
  bool operator>(const OpenEntry& o) const {
    return std::tie(f, cell.ix, cell.iy) > std::tie(o.f, o.cell.ix, o.cell.iy);
  }
};

}  // namespace

Path astar(const OccupancyGrid& grid, const Vec2& start, const Vec2& goal) {
  const Cell s = grid.cell_of(start);
  const Cell g = grid.cell_of(goal);
  if (grid.occupied(s) || grid.occupied(g)) throw PlanningError("pose in collision");

  const int w = grid.width();
  const std::size_t n = static_cast<std::size_t>(w) * grid.height();
  auto index = [w](Cell c) { return static_cast<std::size_t>(c.iy) * w + c.ix; };

  std::vector<double> cost(n, std::numeric_limits<double>::infinity());
  std::vector<std::int64_t> parent(n, -1);
  std::vector<bool> closed(n, false);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;

  cost[index(s)] = 0.0;
  open.push({octile(s, g), s});
  bool found = false;
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const std::size_t ci = index(top.cell);
    if (closed[ci]) continue;
    closed[ci] = true;
    if (top.cell == g) {
      found = true;
      break;
    }
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell nb{top.cell.ix + dx, top.cell.iy + dy};
        if (grid.occupied(nb)) continue;
        const std::size_t ni = index(nb);
        if (closed[ni]) continue;
        const double step = (dx != 0 && dy != 0) ? kSqrt2 : 1.0;
        const double candidate = cost[ci] + step;
        if (candidate < cost[ni]) {
          cost[ni] = candidate;
          parent[ni] = static_cast<std::int64_t>(ci);
          open.push({candidate + octile(nb, g), nb});
        }
      }
    }
  }
  if (!found) throw PlanningError("unreachable goal");

  Path path;
  path.cost = cost[index(g)];
  for (std::int64_t i = static_cast<std::int64_t>(index(g)); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
    path.cells.push_back({static_cast<int>(i % w), static_cast<int>(i / w)});
  }
  std::reverse(path.cells.begin(), path.cells.end());
  path.waypoints.reserve(path.cells.size());
  for (const Cell& c : path.cells) path.waypoints.push_back(grid.center_of(c));
  return path;
}

FollowResult follow_path(const sim::BasePose& pose, const Path& path, const PursuitParams& params) {
  if (path.waypoints.empty()) throw PlanningError("follow_path: empty path");
  const Vec2 p(pose.x, pose.y);
  if ((path.waypoints.back() - p).norm() <= params.goal_tol) return Arrived{};

  std::size_t closest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    const double d = (path.waypoints[i] - p).norm();
    if (d < best) {
      best = d;
      closest = i;
    }
  }
  Vec2 target = path.waypoints.back();
  for (std::size_t i = closest; i < path.waypoints.size(); ++i) {
    if ((path.waypoints[i] - p).norm() >= params.lookahead) {
      target = path.waypoints[i];
      break;
    }
  }
  const Vec2 d = target - p;
  const double error = sim::wrap_angle(std::atan2(d.y(), d.x()) - pose.yaw);
  sim::BaseCommand cmd;
  cmd.omega = params.heading_gain * error;
  cmd.v = sim::kMaxLinearSpeed * std::clamp(1.0 - std::abs(error) / std::numbers::pi, 0.0, 1.0);
  return cmd.clamped();
}

}  // namespace skl::expert
