// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Recorded demonstrations and their on-disk layout.
//
// One directory per episode:
//   manifest.json  schema_version, variant, dims, dt, seed, outcome, failure, scene
//   steps.bin      "SKLDSET1", u32 step count, then per step
//                  5 x f32 state, [2 x f32 base command if long],
//                  width*height*3 bytes rgb, width*height x f32 disparity
//                  (little-endian, row-major)

#ifndef SKL_DATASET_EPISODE_HPP_
#define SKL_DATASET_EPISODE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "skl/expert/expert.hpp"
#include "skl/sim/scenario.hpp"
#include "skl/sim/types.hpp"

namespace skl::dataset {

inline constexpr std::uint32_t kSchemaVersion = 1;
inline constexpr std::size_t kCommandDim = 2;

using StateVec = std::array<float, sim::kNumJoints>;
using CommandVec = std::array<float, kCommandDim>;

struct Step {
  std::uint32_t t = 0;
  StateVec state{};
  /// Present iff the episode is long-variant.
  std::optional<CommandVec> base_cmd;
  std::vector<std::uint8_t> rgb;
  std::vector<float> disparity;
};

enum class Outcome { kDone, kFailed };

struct Episode {
  sim::Variant variant = sim::Variant::kShort;
  sim::WorldConfig scene;
  Outcome outcome = Outcome::kFailed;
  std::string failure;
  std::uint64_t seed = 0;
  double dt = 0.1;
  int width = 64;
  int height = 64;
  std::vector<Step> steps;

  [[nodiscard]] bool succeeded() const { return outcome == Outcome::kDone; }
  /// Throws skl::Error if an Episode invariant does not hold.
  void validate() const;
};

/// Byte-level equality of every tensor and metadata field.
bool bitwise_equal(const Episode& a, const Episode& b);

/// Replays the transcript's commands on a fresh world built from its scene,
/// rendering a frame before every tick. Throws if the replay diverges from the
/// transcript (non-determinism).
Episode record(const expert::ExpertTranscript& transcript);

/// make_scenario + run_expert + record.
Episode collect_episode(sim::Variant variant, std::uint64_t seed, const expert::ExpertOptions& options = {});

void save(const Episode& episode, const std::filesystem::path& dir);
Episode load(const std::filesystem::path& dir);

/// Episode directories of a corpus, sorted by name.
std::vector<std::filesystem::path> list_episodes(const std::filesystem::path& corpus);
std::string episode_dir_name(std::uint64_t seed);

/// Loads every episode of a corpus; FAILED ones are dropped unless asked for.
std::vector<Episode> load_corpus(const std::filesystem::path& corpus, bool include_failed = false);

}  // namespace skl::dataset

#endif  // SKL_DATASET_EPISODE_HPP_
