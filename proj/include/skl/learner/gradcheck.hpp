// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Central finite-difference verification of the hand-written backward passes,
// run on small 64-bit model instances.

#ifndef SKL_LEARNER_GRADCHECK_HPP_
#define SKL_LEARNER_GRADCHECK_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace skl::learner {

enum class GradcheckKind { kAll, kAutoencoder, kPredictor, kLoss, kLayers };

GradcheckKind parse_gradcheck_kind(std::string_view s);

struct GradcheckOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  /// Lower bound on the denominator of the relative error.
  double denominator_floor = 1e-7;
  /// The loss check compares absolute error against this bound instead.
  double loss_tolerance = 1e-10;
};

struct GradcheckEntry {
  std::string check;   // e.g. "autoencoder"
  std::string tensor;  // parameter or input name
  std::size_t elements = 0;
  double max_error = 0.0;
  bool passed = false;
};

struct GradcheckReport {
  std::vector<GradcheckEntry> entries;
  double max_rel_error = 0.0;
  bool passed = true;
};

/// relative error |a - n| / max(|a|, |n|, floor)
double relative_error(double analytic, double numeric, double floor);

GradcheckReport gradcheck(GradcheckKind kind, std::uint64_t seed, const GradcheckOptions& options = {});

}  // namespace skl::learner

#endif  // SKL_LEARNER_GRADCHECK_HPP_
