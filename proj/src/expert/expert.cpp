// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/expert/expert.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include "skl/common/error.hpp"
#include "skl/common/log.hpp"

namespace skl::expert {

std::string_view to_string(ExpertPhase phase) {
  switch (phase) {
    case ExpertPhase::kLocate: return "LOCATE";
    case ExpertPhase::kNavigate: return "NAVIGATE";
    case ExpertPhase::kReach: return "REACH";
    case ExpertPhase::kGrasp: return "GRASP";
    case ExpertPhase::kLift: return "LIFT";
    case ExpertPhase::kDone: return "DONE";
    case ExpertPhase::kFailed: return "FAILED";
  }
  return "?";
}

namespace {

constexpr int kSettleTicks = 5;
constexpr int kMaxAlignTicks = 100;
constexpr int kMaxGraspTicks = 10;
constexpr double kAlignTolerance = 0.01;

class Runner {
 public:
  Runner(sim::World& world, sim::Variant variant, const ExpertOptions& options)
      : world_(world), options_(options), rng_(world.config().rng_seed ^ 0x5EEDF00Dull) {
    transcript_.variant = variant;
    transcript_.scene = world.config();
  }

  ExpertTranscript run(const std::string& target_id) {
    try {
      const sim::ObjectSpec& target = world_.object(target_id);
      if (target_id != world_.config().target_id) {
        throw Error("target '" + target_id + "' is not the scene's designated target");
      }
      locate(target);
      if (transcript_.variant == sim::Variant::kLong) {
        navigate();
        // Refine from the standoff pose, where the object covers many pixels.
        enter(ExpertPhase::kReach);
        transcript_.located =
            perception::locate_object(world_.render(), target.color, options_.perception);
      }
      reach();
      grasp();
      lift();
      enter(ExpertPhase::kDone);
      transcript_.outcome = ExpertPhase::kDone;
    } catch (const Error& e) {
      transcript_.outcome = ExpertPhase::kFailed;
      transcript_.failure = e.what();
      transcript_.phases.push_back(ExpertPhase::kFailed);
      log::info("expert failed after ", transcript_.ticks.size(), " ticks: ", e.what());
    }
    return std::move(transcript_);
  }

 private:
  void enter(ExpertPhase phase) {
    if (transcript_.phases.empty() || transcript_.phases.back() != phase) transcript_.phases.push_back(phase);
  }

  void tick(ExpertPhase phase, const sim::BaseCommand& cmd, const sim::JointVector& target, bool try_attach = false) {
    enter(phase);
    TickRecord rec;
    rec.phase = phase;
    rec.command = cmd.clamped();
    rec.joint_target = target;
    rec.try_attach = try_attach;
    world_.step(rec.command, target);
    if (try_attach) world_.attach_if_grasping();
    rec.state_after = world_.state();
    transcript_.ticks.push_back(std::move(rec));
  }

  void hold(ExpertPhase phase, const sim::BaseCommand& cmd = {}) { tick(phase, cmd, world_.state().joints); }

  void locate(const sim::ObjectSpec& target) {
    enter(ExpertPhase::kLocate);
    if (transcript_.variant == sim::Variant::kShort) {
      std::normal_distribution<double> noise(0.0, options_.marker_noise);
      transcript_.located = target.center + Vec3(noise(rng_), noise(rng_), noise(rng_));
    } else {
      transcript_.located = perception::locate_object(world_.render(), target.color, options_.perception);
    }
    hold(ExpertPhase::kLocate);
  }

  void navigate() {
    const bool jitter = options_.approach_jitter.value_or(true);
    double approach = 0.0;
    if (jitter) {
      approach = std::uniform_real_distribution<double>(-options_.approach_jitter_range,
                                                        options_.approach_jitter_range)(rng_);
    }
    const Vec2 object_xy(transcript_.located.x(), transcript_.located.y());
    const Vec2 goal = object_xy - options_.standoff * Vec2(std::cos(approach), std::sin(approach));

    const auto& base = world_.state().base;
    const OccupancyGrid grid = OccupancyGrid::from_world(world_.config(), Vec2(0.0, 0.0), 3.5);
    const Path path = astar(grid, Vec2(base.x, base.y), goal);

    int ticks = 0;
    while (true) {
      const FollowResult r = follow_path(world_.state().base, path, options_.pursuit);
      if (std::holds_alternative<Arrived>(r)) break;
      if (++ticks > options_.max_navigation_ticks) throw PlanningError("navigation timeout");
      hold(ExpertPhase::kNavigate, std::get<sim::BaseCommand>(r));
    }
    // Turn in place until the arm plane passes through the object.
    for (int i = 0;; ++i) {
      const auto& b = world_.state().base;
      const double err = sim::wrap_angle(std::atan2(object_xy.y() - b.y, object_xy.x() - b.x) - b.yaw);
      if (std::abs(err) < kAlignTolerance) break;
      if (i == kMaxAlignTicks) throw PlanningError("navigation timeout");
      hold(ExpertPhase::kNavigate, sim::BaseCommand{0.0, options_.pursuit.heading_gain * err});
    }
  }

  /// Closest point on the arm's vertical plane.
  Vec3 onto_arm_plane(const Vec3& p) const {
    const auto& b = world_.state().base;
    const Vec2 heading(std::cos(b.yaw), std::sin(b.yaw));
    const double along = (Vec2(p.x(), p.y()) - Vec2(b.x, b.y)).dot(heading);
    return Vec3(b.x + along * heading.x(), b.y + along * heading.y(), p.z());
  }

  void execute(const ArmPlan& plan, ExpertPhase phase) {
    for (std::size_t k = 1; k < plan.joint_waypoints.size(); ++k) tick(phase, {}, plan.joint_waypoints[k]);
    const sim::JointVector& goal = plan.joint_waypoints.back();
    for (int i = 0; i < kSettleTicks; ++i) {
      double err = 0.0;
      for (std::size_t j = 0; j < sim::kNumJoints; ++j) err = std::max(err, std::abs(world_.state().joints[j] - goal[j]));
      if (err <= 1e-12) break;
      tick(phase, {}, goal);
    }
  }

  void reach() {
    enter(ExpertPhase::kReach);
    const auto& base = world_.state().base;
    const Vec3 grasp_point = onto_arm_plane(transcript_.located);
    const Vec3 pregrasp = grasp_point + Vec3(0.0, 0.0, options_.pregrasp_height);

    sim::JointVector q_pre = ik(pregrasp, world_.state().joints, base, options_.ik).joints;
    q_pre[sim::kGripper] = sim::kJointMax[sim::kGripper];
    execute(plan_arm(world_.state().joints, q_pre, world_), ExpertPhase::kReach);

    const sim::JointVector q_grasp = ik(grasp_point, world_.state().joints, base, options_.ik).joints;
    execute(plan_arm(world_.state().joints, q_grasp, world_), ExpertPhase::kReach);
  }

  void grasp() {
    sim::JointVector closed = world_.state().joints;
    closed[sim::kGripper] = sim::kJointMin[sim::kGripper];
    for (int i = 0; i < kMaxGraspTicks; ++i) {
      tick(ExpertPhase::kGrasp, {}, closed, /*try_attach=*/true);
      if (world_.state().attached_object) return;
    }
    throw PlanningError("grasp failed");
  }

  void lift() {
    enter(ExpertPhase::kLift);
    const Vec3 up = world_.tip() + Vec3(0.0, 0.0, options_.lift_height);
    const sim::JointVector q_up = ik(up, world_.state().joints, world_.state().base, options_.ik).joints;
    execute(plan_arm(world_.state().joints, q_up, world_), ExpertPhase::kLift);
  }

  sim::World& world_;
  const ExpertOptions& options_;
  std::mt19937_64 rng_;
  ExpertTranscript transcript_;
};

}  // namespace

ExpertTranscript run_expert(sim::World& world, const std::string& target_id, sim::Variant variant,
                            const ExpertOptions& options) {
  ExpertOptions resolved = options;
  if (!resolved.approach_jitter) resolved.approach_jitter = (variant == sim::Variant::kLong);
  return Runner(world, variant, resolved).run(target_id);
}

void write_transcript(std::ostream& out, const ExpertTranscript& t) {
  out << "# variant=" << sim::to_string(t.variant) << " seed=" << t.scene.rng_seed
      << " outcome=" << to_string(t.outcome);
  if (!t.failure.empty()) out << " failure=\"" << t.failure << '"';
  out << '\n';
  out << std::fixed << std::setprecision(5);
  for (std::size_t i = 0; i < t.ticks.size(); ++i) {
    const auto& r = t.ticks[i];
    out << i << ' ' << to_string(r.phase) << " cmd=(" << r.command.v << ',' << r.command.omega << ") target=(";
    for (std::size_t j = 0; j < sim::kNumJoints; ++j) out << (j ? "," : "") << r.joint_target[j];
    out << ") base=(" << r.state_after.base.x << ',' << r.state_after.base.y << ',' << r.state_after.base.yaw
        << ") joints=(";
    for (std::size_t j = 0; j < sim::kNumJoints; ++j) out << (j ? "," : "") << r.state_after.joints[j];
    out << ')';
    if (r.state_after.attached_object) out << " attached=" << *r.state_after.attached_object;
    out << '\n';
  }
}

}  // namespace skl::expert
