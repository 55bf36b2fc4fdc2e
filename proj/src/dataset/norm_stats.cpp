// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/dataset/norm_stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "skl/common/error.hpp"

namespace skl::dataset {

std::vector<double> step_state(const Step& step) {
  std::vector<double> x(step.state.begin(), step.state.end());
  if (step.base_cmd) x.insert(x.end(), step.base_cmd->begin(), step.base_cmd->end());
  return x;
}

std::vector<double> NormStats::normalize_state(std::span<const double> x) const {
  if (x.size() != state_dim()) throw Error("normalize_state: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = state_flagged[i] ? 0.5 : (x[i] - state_min[i]) / (state_max[i] - state_min[i]);
  }
  return out;
}

std::vector<double> NormStats::denormalize_state(std::span<const double> x) const {
  if (x.size() != state_dim()) throw Error("denormalize_state: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = state_flagged[i] ? state_min[i] : state_min[i] + x[i] * (state_max[i] - state_min[i]);
  }
  return out;
}

NormStats compute_norm_stats(std::span<const Episode> episodes) {
  std::size_t total_steps = 0;
  for (const auto& ep : episodes) total_steps += ep.steps.size();
  if (episodes.empty() || total_steps == 0) throw Error("compute_norm_stats: no steps");

  NormStats stats;
  stats.has_command = episodes.front().variant == sim::Variant::kLong;
  const std::size_t dim = sim::kNumJoints + (stats.has_command ? kCommandDim : 0);
  stats.state_min.assign(dim, std::numeric_limits<double>::infinity());
  stats.state_max.assign(dim, -std::numeric_limits<double>::infinity());

  std::array<double, 3> sum{}, sum_sq{};
  std::size_t pixel_count = 0;
  double disp_sum = 0.0, disp_sum_sq = 0.0;
  std::size_t disp_count = 0;

  for (const auto& ep : episodes) {
    if ((ep.variant == sim::Variant::kLong) != stats.has_command) {
      throw Error("compute_norm_stats: episodes mix long and short variants");
    }
    for (const Step& s : ep.steps) {
      const std::vector<double> x = step_state(s);
      for (std::size_t i = 0; i < dim; ++i) {
        stats.state_min[i] = std::min(stats.state_min[i], x[i]);
        stats.state_max[i] = std::max(stats.state_max[i], x[i]);
      }
      for (std::size_t p = 0; p < s.rgb.size(); p += 3) {
        for (std::size_t c = 0; c < 3; ++c) {
          const double v = s.rgb[p + c] / 255.0;
          sum[c] += v;
          sum_sq[c] += v * v;
        }
      }
      pixel_count += s.rgb.size() / 3;
      for (float d : s.disparity) {
        if (d == 0.0f) continue;
        disp_sum += d;
        disp_sum_sq += static_cast<double>(d) * d;
        ++disp_count;
      }
    }
  }

  stats.state_flagged.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) stats.state_flagged[i] = !(stats.state_max[i] > stats.state_min[i]);

  auto finish = [](double s, double sq, std::size_t n, double& mean, double& stdev, bool& flagged) {
    if (n == 0) {
      mean = 0.0;
      stdev = 1.0;
      flagged = true;
      return;
    }
    mean = s / static_cast<double>(n);
    const double var = std::max(0.0, sq / static_cast<double>(n) - mean * mean);
    stdev = std::sqrt(var);
    flagged = !(stdev > 1e-12);
    if (flagged) stdev = 1.0;
  };
  for (std::size_t c = 0; c < 3; ++c) {
    finish(sum[c], sum_sq[c], pixel_count, stats.image_mean[c], stats.image_std[c], stats.image_flagged[c]);
  }
  finish(disp_sum, disp_sum_sq, disp_count, stats.disp_mean, stats.disp_std, stats.disp_flagged);
  return stats;
}

nlohmann::json to_json(const NormStats& s) {
  return {
      {"state_min", s.state_min},     {"state_max", s.state_max},   {"state_flagged", s.state_flagged},
      {"image_mean", s.image_mean},   {"image_std", s.image_std},   {"image_flagged", s.image_flagged},
      {"disp_mean", s.disp_mean},     {"disp_std", s.disp_std},     {"disp_flagged", s.disp_flagged},
      {"has_command", s.has_command},
  };
}

NormStats norm_stats_from_json(const nlohmann::json& j) {
  NormStats s;
  try {
    j.at("state_min").get_to(s.state_min);
    j.at("state_max").get_to(s.state_max);
    s.state_flagged = j.at("state_flagged").get<std::vector<bool>>();
    j.at("image_mean").get_to(s.image_mean);
    j.at("image_std").get_to(s.image_std);
    j.at("image_flagged").get_to(s.image_flagged);
    j.at("disp_mean").get_to(s.disp_mean);
    j.at("disp_std").get_to(s.disp_std);
    j.at("disp_flagged").get_to(s.disp_flagged);
    j.at("has_command").get_to(s.has_command);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("norm stats: ") + e.what());
  }
  if (s.state_min.size() != s.state_max.size() || s.state_min.size() != s.state_flagged.size()) {
    throw FormatError("norm stats: inconsistent state dimensions");
  }
  return s;
}

void save_norm_stats(const NormStats& stats, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(stats).dump(2) << '\n';
}

NormStats load_norm_stats(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": missing or unreadable");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return norm_stats_from_json(j);
}

}  // namespace skl::dataset
