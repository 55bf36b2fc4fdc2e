// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// The scripted demonstrator: locate the object, drive to it (long variant),
// reach, grasp and lift, recording every simulator tick.

#ifndef SKL_EXPERT_EXPERT_HPP_
#define SKL_EXPERT_EXPERT_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skl/expert/kinematics.hpp"
#include "skl/expert/planning.hpp"
#include "skl/perception/filters.hpp"
#include "skl/sim/scenario.hpp"
#include "skl/sim/world.hpp"

namespace skl::expert {

/// Phases in canonical order. Any phase may jump to kFailed.
enum class ExpertPhase { kLocate, kNavigate, kReach, kGrasp, kLift, kDone, kFailed };

std::string_view to_string(ExpertPhase phase);

struct ExpertOptions {
  perception::PerceptionParams perception;
  PursuitParams pursuit;
  IkOptions ik;
  /// Distance from the object to the navigation goal.
  double standoff = 0.55;
  double pregrasp_height = 0.10;
  double lift_height = 0.15;
  /// Noise of the marker-style pose oracle used by the short variant.
  double marker_noise = 0.005;
  /// Random approach direction (+-0.2 rad) around the object. Unset means on
  /// for the long variant and off for the short one.
  std::optional<bool> approach_jitter;
  double approach_jitter_range = 0.2;
  int max_navigation_ticks = 1500;
};

struct TickRecord {
  ExpertPhase phase = ExpertPhase::kLocate;
  sim::BaseCommand command;
  sim::JointVector joint_target{};
  /// attach_if_grasping was invoked after the step.
  bool try_attach = false;
  sim::RobotState state_after;
};

struct ExpertTranscript {
  sim::Variant variant = sim::Variant::kShort;
  sim::WorldConfig scene;
  std::vector<TickRecord> ticks;
  /// Distinct phases in the order they were entered.
  std::vector<ExpertPhase> phases;
  ExpertPhase outcome = ExpertPhase::kFailed;
  std::string failure;
  /// Object position the expert acted on.
  Vec3 located = Vec3::Zero();

  [[nodiscard]] bool succeeded() const { return outcome == ExpertPhase::kDone; }
};

/// Runs the demonstrator on `world` (which it advances). Never throws for
/// planning or perception failures; they end the transcript in kFailed with
/// the cause in `failure`.
ExpertTranscript run_expert(sim::World& world, const std::string& target_id, sim::Variant variant,
                            const ExpertOptions& options = {});

/// One line per tick: tick, phase, command, joint target, resulting state.
void write_transcript(std::ostream& out, const ExpertTranscript& transcript);

}  // namespace skl::expert

#endif  // SKL_EXPERT_EXPERT_HPP_
