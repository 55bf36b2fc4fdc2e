// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// skl: collect -> train-autoencoder -> train -> eval, plus inspect / render /
// gradcheck. See README.md for usage.

#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "skl/cli/run_config.hpp"
#include "skl/common/error.hpp"
#include "skl/common/log.hpp"
#include "skl/dataset/episode.hpp"
#include "skl/dataset/norm_stats.hpp"
#include "skl/eval/rollout.hpp"
#include "skl/learner/gradcheck.hpp"
#include "skl/learner/model_io.hpp"
#include "skl/learner/training.hpp"
#include "skl/perception/cloud_io.hpp"
#include "skl/perception/filters.hpp"
#include "skl/sim/image_io.hpp"
#include "skl/sim/scenario.hpp"
#include "skl/sim/scene_io.hpp"
#include "skl/sim/world.hpp"

namespace fs = std::filesystem;
using namespace skl;

namespace {

struct Common {
  std::string config_file;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_file, "Config file of 'section.key = value' lines")->check(CLI::ExistingFile);
  cmd->add_option("--set", c.sets, "Override a config key: --set train.epochs=500")->take_all();
}

/// defaults < file < --set < dedicated flags (applied by the caller).
cli::RunConfig resolve(const Common& c) {
  cli::RunConfig cfg;
  if (!c.config_file.empty()) cfg.load_file(c.config_file);
  for (const auto& s : c.sets) cfg.set_assignment(s, cli::Source::kFlag);
  return cfg;
}

void set_if(cli::RunConfig& cfg, const CLI::Option* opt, const std::string& key, const std::string& value) {
  if (opt->count() > 0) cfg.set(key, value, cli::Source::kFlag);
}

fs::path manifest_beside(const fs::path& output) { return fs::path(output.string() + ".manifest.json"); }

// ---------------------------------------------------------------------------

struct CollectArgs {
  Common common;
  std::string variant;
  int episodes = 10;
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 1;
};

int run_collect(const CollectArgs& a) {
  const sim::Variant variant = sim::parse_variant(a.variant);
  const cli::RunConfig cfg = resolve(a.common);
  const expert::ExpertOptions options = cfg.expert_options();
  const fs::path out(a.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw Error(out.string() + ": cannot create output directory");

  const auto n = static_cast<std::size_t>(a.episodes);
  std::vector<std::optional<dataset::Episode>> done(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        done[i] = dataset::collect_episode(variant, a.seed + i, options);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int jobs = std::max(1, std::min(a.jobs, a.episodes));
  std::vector<std::thread> pool;
  for (int k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int successes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t seed = a.seed + i;
    if (!done[i]) {
      std::printf("seed %llu: ERROR %s\n", static_cast<unsigned long long>(seed), errors[i].c_str());
      continue;
    }
    const dataset::Episode& ep = *done[i];
    dataset::save(ep, out / dataset::episode_dir_name(seed));
    successes += ep.succeeded() ? 1 : 0;
    std::printf("seed %llu: %s steps=%zu%s%s\n", static_cast<unsigned long long>(seed),
                ep.succeeded() ? "DONE" : "FAILED", ep.steps.size(), ep.failure.empty() ? "" : " reason=",
                ep.failure.c_str());
  }
  std::printf("collected %d/%d successful %s episodes in %s\n", successes, a.episodes, a.variant.c_str(),
              out.string().c_str());
  const nlohmann::json args = {{"variant", a.variant}, {"episodes", a.episodes}, {"seed", a.seed}, {"out", a.out}};
  cli::write_run_manifest(out / "run_manifest.json", "collect", args, cfg, {});
  return successes > 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct TrainAeArgs {
  Common common;
  std::string data;
  std::string modality;
  std::string out;
  std::string loss_csv;
  int epochs = 0;
  std::uint64_t seed = 0;
  CLI::Option* epochs_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

int run_train_ae(const TrainAeArgs& a) {
  cli::RunConfig cfg = resolve(a.common);
  set_if(cfg, a.epochs_opt, "autoencoder.epochs", std::to_string(a.epochs));
  set_if(cfg, a.seed_opt, "autoencoder.seed", std::to_string(a.seed));
  const learner::Modality modality = learner::parse_modality(a.modality);
  const std::vector<dataset::Episode> episodes = dataset::load_corpus(a.data);
  if (episodes.empty()) throw Error(a.data + ": no successful episodes");
  learner::AeTrainResult r = learner::train_autoencoder(episodes, modality, cfg.ae_train_config());
  learner::ImageEncoder& encoder = r.encoder;
  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  encoder.save(out);
  const fs::path csv = a.loss_csv.empty() ? fs::path(a.out + ".loss.csv") : fs::path(a.loss_csv);
  learner::write_loss_csv(csv, r.loss_curve);
  std::printf("%s autoencoder: %zu epochs, loss %.6g -> %.6g; wrote %s\n", a.modality.c_str(), r.loss_curve.size(),
              r.loss_curve.empty() ? 0.0 : r.loss_curve.front(), r.loss_curve.empty() ? 0.0 : r.loss_curve.back(),
              out.string().c_str());
  const nlohmann::json args = {{"data", a.data}, {"modality", a.modality}, {"out", a.out}, {"loss_csv", csv.string()}};
  cli::write_run_manifest(manifest_beside(out), "train-autoencoder", args, cfg, {a.data});
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  Common common;
  std::string data;
  std::string rgb_encoder;
  std::string disp_encoder;
  std::string out;
  std::string loss_csv;
  int epochs = 0;
  std::uint64_t seed = 0;
  CLI::Option* epochs_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

int run_train(const TrainArgs& a) {
  cli::RunConfig cfg = resolve(a.common);
  set_if(cfg, a.epochs_opt, "train.epochs", std::to_string(a.epochs));
  set_if(cfg, a.seed_opt, "train.seed", std::to_string(a.seed));
  const learner::PredictorTrainConfig tc = cfg.predictor_train_config();
  const std::vector<dataset::Episode> episodes = dataset::load_corpus(a.data);
  learner::ImageEncoder rgb = learner::ImageEncoder::load(a.rgb_encoder);
  learner::ImageEncoder disp = learner::ImageEncoder::load(a.disp_encoder);
  learner::PredictorTrainResult r = learner::train_predictor(episodes, rgb, disp, tc);
  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  r.policy.save(out);
  if (tc.finetune_encoders) {
    rgb.save(a.out + ".rgb_encoder");
    disp.save(a.out + ".disp_encoder");
  }
  const fs::path csv = a.loss_csv.empty() ? fs::path(a.out + ".loss.csv") : fs::path(a.loss_csv);
  learner::write_loss_csv(csv, r.loss_curve);
  std::printf("predictor (%s): %zu epochs, loss %.6g -> %.6g; wrote %s\n",
              std::string(sim::to_string(r.policy.variant())).c_str(), r.loss_curve.size(),
              r.loss_curve.empty() ? 0.0 : r.loss_curve.front(), r.loss_curve.empty() ? 0.0 : r.loss_curve.back(),
              out.string().c_str());
  const nlohmann::json args = {{"data", a.data},
                               {"rgb_encoder", a.rgb_encoder},
                               {"disp_encoder", a.disp_encoder},
                               {"out", a.out},
                               {"loss_csv", csv.string()}};
  cli::write_run_manifest(manifest_beside(out), "train", args, cfg, {a.data, a.rgb_encoder, a.disp_encoder});
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  Common common;
  std::string policy;
  std::string rgb_encoder;
  std::string disp_encoder;
  std::string variant;
  std::uint64_t seed = 0;
  int episodes = 10;
  std::string out;
  std::string summary;
  std::string frames;
  int jobs = 1;
  int max_steps = 0;
  CLI::Option* max_steps_opt = nullptr;
};

int run_eval(const EvalArgs& a) {
  cli::RunConfig cfg = resolve(a.common);
  set_if(cfg, a.max_steps_opt, "eval.max_steps", std::to_string(a.max_steps));
  eval::RolloutOptions options = cfg.rollout_options();
  if (!a.frames.empty()) options.frame_dir = a.frames;
  const learner::Policy policy = learner::Policy::load(a.policy);
  const learner::ImageEncoder rgb = learner::ImageEncoder::load(a.rgb_encoder);
  const learner::ImageEncoder disp = learner::ImageEncoder::load(a.disp_encoder);
  const sim::Variant variant = a.variant.empty() ? policy.variant() : sim::parse_variant(a.variant);

  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < a.episodes; ++i) seeds.push_back(a.seed + static_cast<std::uint64_t>(i));
  const eval::SuiteSummary s = eval::evaluate_suite({policy, rgb, disp}, variant, seeds, options, a.jobs);

  eval::write_reports_csv(std::cout, s.reports);
  eval::write_summary_csv(std::cout, s);
  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  {
    std::ofstream f(out);
    if (!f) throw Error("cannot write " + out.string());
    eval::write_reports_csv(f, s.reports);
  }
  const fs::path summary = a.summary.empty() ? fs::path(a.out + ".summary.csv") : fs::path(a.summary);
  {
    std::ofstream f(summary);
    if (!f) throw Error("cannot write " + summary.string());
    eval::write_summary_csv(f, s);
  }
  const nlohmann::json args = {{"policy", a.policy}, {"rgb_encoder", a.rgb_encoder}, {"disp_encoder", a.disp_encoder},
                               {"variant", std::string(sim::to_string(variant))},
                               {"seed", a.seed}, {"episodes", a.episodes}, {"out", a.out}};
  cli::write_run_manifest(manifest_beside(out), "eval", args, cfg, {a.policy, a.rgb_encoder, a.disp_encoder});
  return 0;
}

// ---------------------------------------------------------------------------

void inspect_model(const fs::path& path) {
  const learner::ModelFile m = learner::load_model(path);
  std::printf("model %s\nmeta %s\n", path.string().c_str(), m.meta.dump().c_str());
  std::printf("param,shape,elements\n");
  for (const auto& p : m.params) {
    std::string shape;
    for (int d : p.shape) shape += (shape.empty() ? "" : "x") + std::to_string(d);
    std::printf("%s,%s,%zu\n", p.name.c_str(), shape.c_str(), p.data.size());
  }
}

int run_inspect(const std::string& target) {
  const fs::path path(target);
  if (fs::is_regular_file(path)) {
    inspect_model(path);
    return 0;
  }
  const auto dirs = dataset::list_episodes(path);
  std::vector<dataset::Episode> all;
  for (const auto& d : dirs) all.push_back(dataset::load(d));
  std::printf("dataset %s: %zu episodes\n", path.string().c_str(), all.size());
  std::printf("episode,seed,variant,outcome,steps,failure\n");
  std::vector<dataset::Episode> ok;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& ep = all[i];
    std::printf("%s,%llu,%s,%s,%zu,%s\n", dirs[i].filename().string().c_str(),
                static_cast<unsigned long long>(ep.seed), std::string(sim::to_string(ep.variant)).c_str(),
                ep.succeeded() ? "DONE" : "FAILED", ep.steps.size(), ep.failure.c_str());
    if (ep.succeeded()) ok.push_back(ep);
  }
  if (!ok.empty()) {
    std::printf("norm_stats (successful episodes)\n%s\n", dataset::to_json(dataset::compute_norm_stats(ok)).dump(2).c_str());
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct RenderArgs {
  Common common;
  std::string variant;
  std::uint64_t seed = 0;
  std::string scene;
  std::string out;
};

int run_render(const RenderArgs& a) {
  const cli::RunConfig cfg = resolve(a.common);
  const sim::WorldConfig scene =
      a.scene.empty() ? sim::make_scenario(sim::parse_variant(a.variant), a.seed) : sim::load_scene(a.scene);
  const sim::World world(scene);
  const sim::SensorFrame frame = world.render();
  const fs::path out(a.out);
  fs::create_directories(out);
  sim::write_ppm(out / "rgb.ppm", frame.width, frame.height, frame.rgb);
  sim::write_disparity_pgm(out / "disparity.pgm", frame.width, frame.height, frame.disparity);
  perception::save_cloud(frame.cloud, out / "cloud.pcld");
  sim::save_scene(scene, out / "scene.json");
  std::printf("wrote %s/{rgb.ppm,disparity.pgm,cloud.pcld,scene.json}: %zu cloud points\n", out.string().c_str(),
              frame.cloud.size());
  try {
    const Vec3 p = perception::locate_object(frame, world.target().color, cfg.expert_options().perception);
    const Vec3 truth = world.target().center;
    std::printf("target %s located at (%.4f, %.4f, %.4f), truth (%.4f, %.4f, %.4f), error %.4f m\n",
                scene.target_id.c_str(), p.x(), p.y(), p.z(), truth.x(), truth.y(), truth.z(), (p - truth).norm());
  } catch (const PerceptionError& e) {
    std::printf("target %s not located: %s\n", scene.target_id.c_str(), e.what());
  }
  const nlohmann::json args = {{"variant", a.variant}, {"seed", a.seed}, {"scene", a.scene}, {"out", a.out}};
  std::vector<fs::path> inputs;
  if (!a.scene.empty()) inputs.emplace_back(a.scene);
  cli::write_run_manifest(out / "run_manifest.json", "render", args, cfg, inputs);
  return 0;
}

// ---------------------------------------------------------------------------

int run_gradcheck(const std::string& model, std::uint64_t seed) {
  const learner::GradcheckReport r = learner::gradcheck(learner::parse_gradcheck_kind(model), seed);
  std::printf("check,tensor,elements,max_error,pass\n");
  for (const auto& e : r.entries) {
    std::printf("%s,%s,%zu,%.3e,%s\n", e.check.c_str(), e.tensor.c_str(), e.elements, e.max_error,
                e.passed ? "yes" : "no");
  }
  std::printf("max relative error %.3e (tolerance 1e-4): %s\n", r.max_rel_error, r.passed ? "PASS" : "FAIL");
  return r.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skl: scripted-expert data collection and predictive skill learning"};
  app.set_version_flag("--version", cli::tool_version());
  app.require_subcommand(1);

  CollectArgs collect;
  auto* c = app.add_subcommand("collect", "Run seeded expert episodes and save them");
  add_common(c, collect.common);
  c->add_option("--variant", collect.variant, "long | short")->required();
  c->add_option("--episodes", collect.episodes, "Number of episodes (>= 1)")->check(CLI::Range(1, 1 << 30));
  c->add_option("--seed", collect.seed, "First scenario seed; episode i uses seed + i");
  c->add_option("--out", collect.out, "Output dataset directory")->required();
  c->add_option("--jobs", collect.jobs, "Worker threads")->check(CLI::Range(1, 1 << 30));

  TrainAeArgs tae;
  auto* ta = app.add_subcommand("train-autoencoder", "Train an image autoencoder on a dataset");
  add_common(ta, tae.common);
  ta->add_option("--data", tae.data, "Dataset directory")->required();
  ta->add_option("--modality", tae.modality, "rgb | disparity")->required();
  ta->add_option("--out", tae.out, "Encoder model file")->required();
  ta->add_option("--loss-csv", tae.loss_csv, "Loss curve CSV (default <out>.loss.csv)");
  tae.epochs_opt = ta->add_option("--epochs", tae.epochs, "autoencoder.epochs")->check(CLI::NonNegativeNumber);
  tae.seed_opt = ta->add_option("--seed", tae.seed, "autoencoder.seed");

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train the next-state predictor on frozen encoders");
  add_common(t, tr.common);
  t->add_option("--data", tr.data, "Dataset directory")->required();
  t->add_option("--rgb-encoder", tr.rgb_encoder, "RGB encoder model")->required();
  t->add_option("--disp-encoder", tr.disp_encoder, "Disparity encoder model")->required();
  t->add_option("--out", tr.out, "Policy model file")->required();
  t->add_option("--loss-csv", tr.loss_csv, "Loss curve CSV (default <out>.loss.csv)");
  tr.epochs_opt = t->add_option("--epochs", tr.epochs, "train.epochs")->check(CLI::NonNegativeNumber);
  tr.seed_opt = t->add_option("--seed", tr.seed, "train.seed");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Closed-loop rollouts of a trained policy");
  add_common(e, ev.common);
  e->add_option("--policy", ev.policy, "Policy model file")->required();
  e->add_option("--rgb-encoder", ev.rgb_encoder, "RGB encoder model")->required();
  e->add_option("--disp-encoder", ev.disp_encoder, "Disparity encoder model")->required();
  e->add_option("--variant", ev.variant, "Scenario family (default: the policy's)");
  e->add_option("--seed", ev.seed, "First scenario seed");
  e->add_option("--episodes", ev.episodes, "Number of scenarios")->check(CLI::Range(1, 1 << 30));
  e->add_option("--out", ev.out, "Per-rollout CSV")->required();
  e->add_option("--summary", ev.summary, "Aggregate CSV (default <out>.summary.csv)");
  e->add_option("--frames", ev.frames, "Dump every rollout frame as PPM under this directory");
  e->add_option("--jobs", ev.jobs, "Worker threads")->check(CLI::Range(1, 1 << 30));
  ev.max_steps_opt = e->add_option("--max-steps", ev.max_steps, "eval.max_steps")->check(CLI::Range(1, 1 << 30));

  std::string inspect_target;
  auto* in = app.add_subcommand("inspect", "Print a dataset's episodes and norm stats, or a model's parameters");
  in->add_option("path", inspect_target, "Dataset directory or model file")->required()->check(CLI::ExistingPath);

  RenderArgs rd;
  auto* r = app.add_subcommand("render", "Render a scenario's first frame and locate its target");
  add_common(r, rd.common);
  r->add_option("--variant", rd.variant, "long | short")->default_val("short");
  r->add_option("--seed", rd.seed, "Scenario seed");
  r->add_option("--scene", rd.scene, "Scene JSON file instead of a generated scenario")->check(CLI::ExistingFile);
  r->add_option("--out", rd.out, "Output directory")->required();

  std::string gc_model = "all";
  std::uint64_t gc_seed = 1;
  auto* g = app.add_subcommand("gradcheck", "Compare analytic gradients with central differences");
  g->add_option("--model", gc_model, "all | autoencoder | predictor | loss | layers");
  g->add_option("--seed", gc_seed, "Seed for the miniature models");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c->parsed()) return run_collect(collect);
    if (ta->parsed()) return run_train_ae(tae);
    if (t->parsed()) return run_train(tr);
    if (e->parsed()) return run_eval(ev);
    if (in->parsed()) return run_inspect(inspect_target);
    if (r->parsed()) return run_render(rd);
    if (g->parsed()) return run_gradcheck(gc_model, gc_seed);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 1;
}
