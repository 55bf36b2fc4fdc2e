// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/eval/rollout.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "skl/common/error.hpp"
#include "skl/common/log.hpp"
#include "skl/sim/image_io.hpp"
#include "skl/sim/world.hpp"

namespace skl::eval {

namespace {

void check_bundle(const PolicyBundle& bundle, sim::Variant variant) {
  if (bundle.policy.variant() != variant) {
    throw Error("rollout: policy trained on the " + std::string(sim::to_string(bundle.policy.variant())) +
                " variant cannot drive a " + std::string(sim::to_string(variant)) + " scenario");
  }
  bundle.policy.check_encoders(bundle.rgb, bundle.disp);
}

}  // namespace

RolloutReport rollout(const PolicyBundle& bundle, const sim::WorldConfig& scene, sim::Variant variant,
                      const RolloutOptions& options) {
  check_bundle(bundle, variant);
  if (options.max_steps <= 0) throw Error("rollout: max_steps must be positive");
  if (options.frame_dir) std::filesystem::create_directories(*options.frame_dir);

  const bool is_long = variant == sim::Variant::kLong;
  sim::World world(scene);
  RolloutReport report;
  report.scenario = std::string(sim::to_string(variant));
  report.seed = scene.rng_seed;

  auto hidden = bundle.policy.predictor().zero_state();
  // Base command in effect this tick; the policy predicts the next one.
  sim::BaseCommand command{};
  for (int t = 0; t < options.max_steps; ++t) {
    const sim::SensorFrame frame = world.render();
    if (options.frame_dir) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%04d.ppm", t);
      sim::write_ppm(*options.frame_dir / name, frame.width, frame.height, frame.rgb);
    }
    std::vector<double> state(world.state().joints.begin(), world.state().joints.end());
    if (is_long) {
      state.push_back(static_cast<double>(static_cast<float>(command.v)));
      state.push_back(static_cast<double>(static_cast<float>(command.omega)));
    }
    // Recorded states are f32; quantize the same way before normalizing.
    for (double& v : state) v = static_cast<double>(static_cast<float>(v));
    const std::vector<double> next = bundle.policy.stats().denormalize_state(bundle.policy.predict_next(
        bundle.rgb, bundle.disp, {frame.rgb, frame.disparity}, bundle.policy.stats().normalize_state(state), hidden));

    sim::JointVector target{};
    for (std::size_t j = 0; j < target.size(); ++j) target[j] = next[j];
    world.step(command, target);
    if (is_long) command = sim::BaseCommand{next[sim::kNumJoints], next[sim::kNumJoints + 1]}.clamped();
    report.steps_executed = t + 1;

    if (!report.touched && world.touching()) {
      report.touched = true;
      report.ticks_to_touch = t + 1;
    }
    if (world.attach_if_grasping()) {
      report.grasped = true;
      break;
    }
    if (!options.workspace.contains(world.tip(), 0.0)) {
      report.left_workspace = true;
      log::info("rollout seed ", scene.rng_seed, ": tip left the workspace at tick ", t + 1);
      break;
    }
  }
  report.final_tip_distance = (world.tip() - world.target().center).norm();
  return report;
}

SuiteSummary summarize(std::vector<RolloutReport> reports) {
  SuiteSummary s;
  s.reports = std::move(reports);
  if (s.reports.empty()) return s;
  double ticks = 0.0, dist = 0.0;
  int touched = 0, grasped = 0;
  for (const auto& r : s.reports) {
    touched += r.touched ? 1 : 0;
    grasped += r.grasped ? 1 : 0;
    if (r.ticks_to_touch) ticks += *r.ticks_to_touch;
    dist += r.final_tip_distance;
  }
  const double n = static_cast<double>(s.reports.size());
  s.touch_rate = touched / n;
  s.grasp_rate = grasped / n;
  if (touched > 0) s.mean_ticks_to_touch = ticks / touched;
  s.mean_final_tip_distance = dist / n;
  return s;
}

SuiteSummary evaluate_suite(const PolicyBundle& bundle, sim::Variant variant, const std::vector<std::uint64_t>& seeds,
                            const RolloutOptions& options, int jobs) {
  if (seeds.empty()) throw Error("evaluate_suite: no scenarios");
  check_bundle(bundle, variant);

  std::vector<RolloutReport> reports(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        RolloutOptions opt = options;
        if (opt.frame_dir) *opt.frame_dir /= "seed_" + std::to_string(seeds[i]);
        reports[i] = rollout(bundle, sim::make_scenario(variant, seeds[i]), variant, opt);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(seeds.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return summarize(std::move(reports));
}

void write_reports_csv(std::ostream& out, const std::vector<RolloutReport>& reports) {
  out << "scenario,seed,touched,grasped,ticks_to_touch,final_tip_distance_m,steps\n";
  char buf[32];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%.6f", r.final_tip_distance);
    out << r.scenario << ',' << r.seed << ',' << (r.touched ? 1 : 0) << ',' << (r.grasped ? 1 : 0) << ','
        << (r.ticks_to_touch ? std::to_string(*r.ticks_to_touch) : "") << ',' << buf << ',' << r.steps_executed
        << '\n';
  }
}

void write_summary_csv(std::ostream& out, const SuiteSummary& s) {
  out << "rollouts,touch_rate,grasp_rate,mean_ticks_to_touch,mean_final_tip_distance_m\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%zu,%.4f,%.4f,", s.reports.size(), s.touch_rate, s.grasp_rate);
  out << buf;
  if (s.mean_ticks_to_touch) {
    std::snprintf(buf, sizeof(buf), "%.2f", *s.mean_ticks_to_touch);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), ",%.6f\n", s.mean_final_tip_distance);
  out << buf;
}

}  // namespace skl::eval
