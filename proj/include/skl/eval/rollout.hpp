// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SKL_EVAL_ROLLOUT_HPP_
#define SKL_EVAL_ROLLOUT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "skl/learner/training.hpp"
#include "skl/sim/scenario.hpp"
#include "skl/sim/types.hpp"

namespace skl::eval {

struct RolloutOptions {
  int max_steps = 300;
  /// Axis-aligned bounds the tip must stay inside; leaving them ends the run.
  sim::Box workspace{Vec3(0.0, 0.0, 0.975), Vec3(3.0, 3.0, 1.025)};
  /// When set, every rendered frame is written here as PPM.
  std::optional<std::filesystem::path> frame_dir;
};

struct RolloutReport {
  std::string scenario;
  std::uint64_t seed = 0;
  bool touched = false;
  bool grasped = false;
  std::optional<int> ticks_to_touch;
  double final_tip_distance = 0.0;
  int steps_executed = 0;
  bool left_workspace = false;
};

/// The policy bundle used for closed-loop control; read-only during rollouts.
struct PolicyBundle {
  const learner::Policy& policy;
  const learner::ImageEncoder& rgb;
  const learner::ImageEncoder& disp;
};

/// Closed-loop run of the policy on `scene`. Throws when the policy was trained
/// on a different variant.
RolloutReport rollout(const PolicyBundle& bundle, const sim::WorldConfig& scene, sim::Variant variant,
                      const RolloutOptions& options = {});

struct SuiteSummary {
  std::vector<RolloutReport> reports;
  double touch_rate = 0.0;
  double grasp_rate = 0.0;
  /// Mean over touching rollouts only; empty when none touched.
  std::optional<double> mean_ticks_to_touch;
  double mean_final_tip_distance = 0.0;
};

SuiteSummary summarize(std::vector<RolloutReport> reports);

/// Rolls out the policy on make_scenario(variant, seed) for every seed.
/// `jobs` > 1 fans rollouts out over threads; reports stay in seed order.
SuiteSummary evaluate_suite(const PolicyBundle& bundle, sim::Variant variant, const std::vector<std::uint64_t>& seeds,
                            const RolloutOptions& options = {}, int jobs = 1);

void write_reports_csv(std::ostream& out, const std::vector<RolloutReport>& reports);
void write_summary_csv(std::ostream& out, const SuiteSummary& summary);

}  // namespace skl::eval

#endif  // SKL_EVAL_ROLLOUT_HPP_
