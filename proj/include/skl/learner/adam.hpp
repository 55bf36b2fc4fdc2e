// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SKL_LEARNER_ADAM_HPP_
#define SKL_LEARNER_ADAM_HPP_

#include <cmath>
#include <vector>

#include "skl/learner/tensor.hpp"

namespace skl::learner {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  /// Global L2 gradient-norm clip; <= 0 disables.
  double clip_norm = 5.0;
};

/// Global L2 norm of all gradients, accumulated in double in parameter order.
template <typename T>
double grad_norm(const ParamList<T>& params) {
  double sq = 0.0;
  for (const Param<T>* p : params) {
    for (T g : p->grad.data) sq += static_cast<double>(g) * static_cast<double>(g);
  }
  return std::sqrt(sq);
}

template <typename T>
class Adam {
 public:
  Adam(ParamList<T> params, AdamConfig config) : params_(std::move(params)), config_(config) {
    for (const Param<T>* p : params_) {
      m_.emplace_back(p->value.size(), 0.0);
      v_.emplace_back(p->value.size(), 0.0);
    }
  }

  /// Clips the gradients, applies one update and returns the pre-clip norm.
  double step() {
    const double norm = grad_norm(params_);
    const double scale = (config_.clip_norm > 0.0 && norm > config_.clip_norm) ? config_.clip_norm / norm : 1.0;
    ++t_;
    const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    for (std::size_t k = 0; k < params_.size(); ++k) {
      Param<T>& p = *params_[k];
      std::vector<double>& m = m_[k];
      std::vector<double>& v = v_[k];
      for (std::size_t i = 0; i < p.value.size(); ++i) {
        const double g = static_cast<double>(p.grad[i]) * scale;
        m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
        v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
        const double update = config_.lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.eps);
        p.value[i] = static_cast<T>(static_cast<double>(p.value[i]) - update);
      }
    }
    return norm;
  }

  [[nodiscard]] long steps() const { return t_; }

 private:
  ParamList<T> params_;
  AdamConfig config_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  long t_ = 0;
};

}  // namespace skl::learner

#endif  // SKL_LEARNER_ADAM_HPP_
