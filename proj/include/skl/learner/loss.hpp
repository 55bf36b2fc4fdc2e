// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SKL_LEARNER_LOSS_HPP_
#define SKL_LEARNER_LOSS_HPP_

#include <span>

#include "skl/common/error.hpp"

namespace skl::learner {

/// Mean squared error over every scalar element: (1/N) * sum (target - pred)^2.
template <typename T>
double loss_mse(std::span<const T> target, std::span<const T> pred) {
  if (target.size() != pred.size()) throw Error("loss_mse: shape mismatch");
  if (target.empty()) throw Error("loss_mse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = static_cast<double>(target[i]) - static_cast<double>(pred[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(target.size());
}

/// d loss / d pred = 2 (pred - target) / n, where n is the element count the
/// loss averages over (callers splitting a batch pass the batch total).
template <typename T>
void loss_mse_grad(std::span<const T> target, std::span<const T> pred, std::size_t n, std::span<T> dpred) {
  if (target.size() != pred.size() || dpred.size() != pred.size()) throw Error("loss_mse_grad: shape mismatch");
  const T scale = T(2) / static_cast<T>(n);
  for (std::size_t i = 0; i < pred.size(); ++i) dpred[i] = scale * (pred[i] - target[i]);
}

}  // namespace skl::learner

#endif  // SKL_LEARNER_LOSS_HPP_
