// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Normalization: min-max to [0, 1] for robot state (and base commands),
// z-score for images and disparity.

#ifndef SKL_DATASET_NORM_STATS_HPP_
#define SKL_DATASET_NORM_STATS_HPP_

#include <array>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <span>
#include <vector>

#include "skl/dataset/episode.hpp"

namespace skl::dataset {

struct NormStats {
  /// Learner state layout: joints, then (v, omega) for long episodes.
  std::vector<double> state_min;
  std::vector<double> state_max;
  /// Dimension had max == min; it normalizes to 0.5.
  std::vector<bool> state_flagged;
  /// RGB statistics over values scaled to [0, 1].
  std::array<double, 3> image_mean{};
  std::array<double, 3> image_std{1.0, 1.0, 1.0};
  std::array<bool, 3> image_flagged{};
  /// Over non-zero disparities only.
  double disp_mean = 0.0;
  double disp_std = 1.0;
  bool disp_flagged = false;
  bool has_command = false;

  [[nodiscard]] std::size_t state_dim() const { return state_min.size(); }

  [[nodiscard]] std::vector<double> normalize_state(std::span<const double> x) const;
  [[nodiscard]] std::vector<double> denormalize_state(std::span<const double> x) const;

  friend bool operator==(const NormStats&, const NormStats&) = default;
};

/// Statistics over all steps of the given episodes. Throws on empty input.
NormStats compute_norm_stats(std::span<const Episode> episodes);

/// Learner state of a step: joints, plus the base command when present.
std::vector<double> step_state(const Step& step);

nlohmann::json to_json(const NormStats& stats);
NormStats norm_stats_from_json(const nlohmann::json& j);
void save_norm_stats(const NormStats& stats, const std::filesystem::path& path);
NormStats load_norm_stats(const std::filesystem::path& path);

}  // namespace skl::dataset

#endif  // SKL_DATASET_NORM_STATS_HPP_
