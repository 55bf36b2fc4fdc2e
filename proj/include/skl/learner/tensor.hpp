// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SKL_LEARNER_TENSOR_HPP_
#define SKL_LEARNER_TENSOR_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "skl/common/error.hpp"

namespace skl::learner {

/// Dense row-major array. Models run in float; gradient checks instantiate
/// the same code with double.
template <typename T>
struct Tensor {
  std::vector<int> shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s, T fill = T(0)) : shape(std::move(s)), data(count(shape), fill) {}

  static std::size_t count(const std::vector<int>& s) {
    return std::accumulate(s.begin(), s.end(), std::size_t{1},
                           [](std::size_t a, int b) { return a * static_cast<std::size_t>(b); });
  }

  [[nodiscard]] std::size_t size() const { return data.size(); }
  T& operator[](std::size_t i) { return data[i]; }
  const T& operator[](std::size_t i) const { return data[i]; }
  [[nodiscard]] std::span<T> span() { return data; }
  [[nodiscard]] std::span<const T> span() const { return data; }
  void zero() { std::fill(data.begin(), data.end(), T(0)); }

  [[nodiscard]] bool all_finite() const {
    return std::all_of(data.begin(), data.end(), [](T v) { return std::isfinite(v); });
  }
};

/// A learnable tensor and its accumulated gradient.
template <typename T>
struct Param {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;

  Param() = default;
  Param(std::string n, std::vector<int> shape) : name(std::move(n)), value(shape), grad(shape) {}
};

template <typename T>
using ParamList = std::vector<Param<T>*>;

template <typename T>
void zero_grads(const ParamList<T>& params) {
  for (Param<T>* p : params) p->grad.zero();
}

/// Names the first parameter holding a non-finite value, or "" if none.
template <typename T>
std::string first_non_finite(const ParamList<T>& params) {
  for (const Param<T>* p : params) {
    if (!p->value.all_finite()) return p->name;
  }
  return {};
}

}  // namespace skl::learner

#endif  // SKL_LEARNER_TENSOR_HPP_
