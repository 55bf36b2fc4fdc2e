// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/dataset/episode.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "skl/common/binary_io.hpp"
#include "skl/common/error.hpp"
#include "skl/sim/scene_io.hpp"
#include "skl/sim/world.hpp"

namespace skl::dataset {
namespace {

constexpr std::string_view kStepsMagic = "SKLDSET1";

template <typename T>
bool same_bytes(const T& a, const T& b) {
  return std::memcmp(&a, &b, sizeof(T)) == 0;
}

template <typename T>
bool same_bytes(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0);
}

std::string outcome_name(Outcome o) { return o == Outcome::kDone ? "DONE" : "FAILED"; }

Outcome parse_outcome(const std::string& s, const std::string& file) {
  if (s == "DONE") return Outcome::kDone;
  if (s == "FAILED") return Outcome::kFailed;
  throw FormatError(file + ": unknown outcome '" + s + "'");
}

StateVec to_state(const sim::JointVector& q) {
  StateVec s{};
  for (std::size_t i = 0; i < q.size(); ++i) s[i] = static_cast<float>(q[i]);
  return s;
}

}  // namespace

void Episode::validate() const {
  const std::size_t pixels = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Step& s = steps[i];
    if (s.t != i) throw Error("episode: tick indices must be consecutive from 0");
    if (s.base_cmd.has_value() != (variant == sim::Variant::kLong)) {
      throw Error("episode: base command presence must match the variant");
    }
    if (s.rgb.size() != pixels * 3 || s.disparity.size() != pixels) {
      throw Error("episode: image size does not match " + std::to_string(width) + "x" + std::to_string(height));
    }
  }
}

bool bitwise_equal(const Episode& a, const Episode& b) {
  if (a.variant != b.variant || a.outcome != b.outcome || a.failure != b.failure || a.seed != b.seed ||
      !same_bytes(a.dt, b.dt) || a.width != b.width || a.height != b.height ||
      a.steps.size() != b.steps.size()) {
    return false;
  }
  if (sim::scene_to_json(a.scene).dump() != sim::scene_to_json(b.scene).dump()) return false;
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    const Step& x = a.steps[i];
    const Step& y = b.steps[i];
    if (x.t != y.t || !same_bytes(x.state, y.state) || x.base_cmd.has_value() != y.base_cmd.has_value()) return false;
    if (x.base_cmd && !same_bytes(*x.base_cmd, *y.base_cmd)) return false;
    if (!same_bytes(x.rgb, y.rgb) || !same_bytes(x.disparity, y.disparity)) return false;
  }
  return true;
}

Episode record(const expert::ExpertTranscript& transcript) {
  sim::World world(transcript.scene);
  Episode ep;
  ep.variant = transcript.variant;
  ep.scene = transcript.scene;
  ep.outcome = transcript.succeeded() ? Outcome::kDone : Outcome::kFailed;
  ep.failure = transcript.failure;
  ep.seed = transcript.scene.rng_seed;
  ep.dt = transcript.scene.dt;
  ep.width = transcript.scene.camera.width;
  ep.height = transcript.scene.camera.height;
  ep.steps.reserve(transcript.ticks.size());

  for (std::size_t i = 0; i < transcript.ticks.size(); ++i) {
    const expert::TickRecord& rec = transcript.ticks[i];
    sim::SensorFrame frame = world.render();
    Step step;
    step.t = static_cast<std::uint32_t>(i);
    step.state = to_state(world.state().joints);
    if (ep.variant == sim::Variant::kLong) {
      step.base_cmd = CommandVec{static_cast<float>(rec.command.v), static_cast<float>(rec.command.omega)};
    }
    step.rgb = std::move(frame.rgb);
    step.disparity = std::move(frame.disparity);
    ep.steps.push_back(std::move(step));

    world.step(rec.command, rec.joint_target);
    if (rec.try_attach) world.attach_if_grasping();
    if (!(world.state() == rec.state_after)) {
      throw Error("record: replay diverged from the transcript at tick " + std::to_string(i));
    }
  }
  return ep;
}

Episode collect_episode(sim::Variant variant, std::uint64_t seed, const expert::ExpertOptions& options) {
  const sim::WorldConfig scene = sim::make_scenario(variant, seed);
  sim::World world(scene);
  const expert::ExpertTranscript transcript = expert::run_expert(world, scene.target_id, variant, options);
  return record(transcript);
}

void save(const Episode& ep, const std::filesystem::path& dir) {
  ep.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());

  const bool is_long = ep.variant == sim::Variant::kLong;
  nlohmann::json manifest = {
      {"schema_version", kSchemaVersion},
      {"variant", std::string(sim::to_string(ep.variant))},
      {"dims",
       {{"state", sim::kNumJoints}, {"base_cmd", is_long ? kCommandDim : 0}, {"width", ep.width}, {"height", ep.height}}},
      {"dt", ep.dt},
      {"seed", ep.seed},
      {"outcome", outcome_name(ep.outcome)},
      {"failure", ep.failure},
      {"steps", ep.steps.size()},
      {"scene", sim::scene_to_json(ep.scene)},
  };
  {
    std::ofstream out(dir / "manifest.json");
    if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
  }

  std::ofstream out(dir / "steps.bin", std::ios::binary);
  if (!out) throw Error("cannot write " + (dir / "steps.bin").string());
  io::write_bytes(out, kStepsMagic.data(), kStepsMagic.size());
  io::write_u32(out, static_cast<std::uint32_t>(ep.steps.size()));
  for (const Step& s : ep.steps) {
    io::write_f32_span(out, s.state);
    if (s.base_cmd) io::write_f32_span(out, *s.base_cmd);
    io::write_bytes(out, s.rgb.data(), s.rgb.size());
    io::write_f32_span(out, s.disparity);
  }
  if (!out) throw Error("write failed: " + (dir / "steps.bin").string());
}

Episode load(const std::filesystem::path& dir) {
  const std::filesystem::path manifest_path = dir / "manifest.json";
  std::ifstream min(manifest_path);
  if (!min) throw FormatError(manifest_path.string() + ": missing or unreadable");
  nlohmann::json m;
  Episode ep;
  std::size_t expected_steps = 0;
  bool is_long = false;
  try {
    min >> m;
    if (m.at("schema_version").get<std::uint32_t>() != kSchemaVersion) {
      throw FormatError(manifest_path.string() + ": unsupported dataset version " +
                        m.at("schema_version").dump());
    }
    ep.variant = sim::parse_variant(m.at("variant").get<std::string>());
    is_long = ep.variant == sim::Variant::kLong;
    const auto& dims = m.at("dims");
    if (dims.at("state").get<std::size_t>() != sim::kNumJoints ||
        dims.at("base_cmd").get<std::size_t>() != (is_long ? kCommandDim : 0)) {
      throw FormatError(manifest_path.string() + ": dims do not match variant");
    }
    ep.width = dims.at("width").get<int>();
    ep.height = dims.at("height").get<int>();
    ep.dt = m.at("dt").get<double>();
    ep.seed = m.at("seed").get<std::uint64_t>();
    ep.outcome = parse_outcome(m.at("outcome").get<std::string>(), manifest_path.string());
    ep.failure = m.at("failure").get<std::string>();
    expected_steps = m.at("steps").get<std::size_t>();
    ep.scene = sim::scene_from_json(m.at("scene"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(manifest_path.string() + ": " + e.what());
  }
  if (ep.width <= 0 || ep.height <= 0) throw FormatError(manifest_path.string() + ": bad image dims");

  const std::filesystem::path steps_path = dir / "steps.bin";
  std::ifstream in(steps_path, std::ios::binary);
  if (!in) throw FormatError(steps_path.string() + ": missing or unreadable");
  io::Reader reader(in, steps_path.string());
  reader.expect_magic(kStepsMagic);
  const std::uint32_t count = reader.u32();
  if (count != expected_steps) {
    throw FormatError(steps_path.string() + ": step count " + std::to_string(count) +
                      " disagrees with manifest (" + std::to_string(expected_steps) + ")");
  }
  const std::size_t pixels = static_cast<std::size_t>(ep.width) * static_cast<std::size_t>(ep.height);
  const std::size_t step_bytes =
      sizeof(StateVec) + (is_long ? sizeof(CommandVec) : 0) + pixels * 3 + pixels * sizeof(float);
  const std::size_t expected_bytes = kStepsMagic.size() + sizeof(std::uint32_t) + count * step_bytes;
  const std::size_t actual_bytes = std::filesystem::file_size(steps_path);
  if (actual_bytes != expected_bytes) {
    throw FormatError(steps_path.string() + ": expected " + std::to_string(expected_bytes) + " bytes for " +
                      std::to_string(count) + " steps, found " + std::to_string(actual_bytes));
  }
  ep.steps.resize(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Step& s = ep.steps[i];
    s.t = i;
    reader.f32_span(s.state);
    if (is_long) {
      CommandVec c{};
      reader.f32_span(c);
      s.base_cmd = c;
    }
    s.rgb.resize(pixels * 3);
    reader.read_bytes(s.rgb.data(), s.rgb.size());
    s.disparity.resize(pixels);
    reader.f32_span(s.disparity);
  }
  reader.expect_end();
  return ep;
}

std::string episode_dir_name(std::uint64_t seed) {
  std::ostringstream os;
  os << "ep_" << std::setw(6) << std::setfill('0') << seed;
  return os.str();
}

std::vector<std::filesystem::path> list_episodes(const std::filesystem::path& corpus) {
  if (!std::filesystem::is_directory(corpus)) throw Error(corpus.string() + ": not a dataset directory");
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : std::filesystem::directory_iterator(corpus)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "manifest.json")) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

std::vector<Episode> load_corpus(const std::filesystem::path& corpus, bool include_failed) {
  std::vector<Episode> out;
  for (const auto& dir : list_episodes(corpus)) {
    Episode ep = load(dir);
    if (include_failed || ep.succeeded()) out.push_back(std::move(ep));
  }
  return out;
}

}  // namespace skl::dataset
