// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Recurrent next-state model: one LSTM cell (gates input, forget, output,
// candidate) followed by a linear readout.

#ifndef SKL_LEARNER_PREDICTOR_HPP_
#define SKL_LEARNER_PREDICTOR_HPP_

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>
#include <span>
#include <vector>

#include "skl/learner/tensor.hpp"

namespace skl::learner {

struct PredictorConfig {
  int input = 69;
  int hidden = 64;
  int output = 5;

  void validate() const {
    if (input <= 0 || hidden <= 0 || output <= 0) throw Error("predictor: bad config");
  }
  friend bool operator==(const PredictorConfig&, const PredictorConfig&) = default;
};

inline nlohmann::json to_json(const PredictorConfig& c) {
  return {{"input", c.input}, {"hidden", c.hidden}, {"output", c.output}};
}

inline PredictorConfig predictor_config_from_json(const nlohmann::json& j) {
  PredictorConfig c{j.at("input").get<int>(), j.at("hidden").get<int>(), j.at("output").get<int>()};
  c.validate();
  return c;
}

template <typename T>
struct RecurrentState {
  std::vector<T> h;
  std::vector<T> c;
};

template <typename T>
class Predictor {
 public:
  explicit Predictor(PredictorConfig config)
      : config_(config),
        w_x_("lstm.w_x", {4 * config.hidden, config.input}),
        w_h_("lstm.w_h", {4 * config.hidden, config.hidden}),
        b_("lstm.bias", {4 * config.hidden}),
        w_out_("readout.weight", {config.output, config.hidden}),
        b_out_("readout.bias", {config.output}) {
    config_.validate();
  }

  [[nodiscard]] const PredictorConfig& config() const { return config_; }

  void init(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(config_.hidden));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (auto& w : w_x_.value.data) w = static_cast<T>(u(rng));
    for (auto& w : w_h_.value.data) w = static_cast<T>(u(rng));
    b_.value.zero();
    // Forget-gate bias 1 so early training keeps the cell state.
    for (int k = 0; k < config_.hidden; ++k) b_.value[static_cast<std::size_t>(config_.hidden + k)] = T(1);
    for (auto& w : w_out_.value.data) w = static_cast<T>(u(rng));
    b_out_.value.zero();
  }

  ParamList<T> params() { return {&w_x_, &w_h_, &b_, &w_out_, &b_out_}; }

  [[nodiscard]] RecurrentState<T> zero_state() const {
    return {std::vector<T>(static_cast<std::size_t>(config_.hidden), T(0)),
            std::vector<T>(static_cast<std::size_t>(config_.hidden), T(0))};
  }

  /// One step without caching. Pure given (parameters, x, state).
  std::vector<T> step(std::span<const T> x, RecurrentState<T>& state) const {
    StepCache cache;
    return forward_step(x, state, cache);
  }

  /// Forward over a window, caching activations for backward_window. `state`
  /// is advanced to the end of the window.
  std::vector<std::vector<T>> forward_window(const std::vector<std::vector<T>>& xs, RecurrentState<T>& state) {
    caches_.assign(xs.size(), StepCache{});
    std::vector<std::vector<T>> ys;
    ys.reserve(xs.size());
    for (std::size_t t = 0; t < xs.size(); ++t) ys.push_back(forward_step(xs[t], state, caches_[t]));
    return ys;
  }

  /// Backpropagation through the cached window; the incoming state is treated
  /// as a constant (truncated BPTT). Returns d loss / d x per step.
  std::vector<std::vector<T>> backward_window(const std::vector<std::vector<T>>& dys) {
    const std::size_t H = static_cast<std::size_t>(config_.hidden);
    const std::size_t I = static_cast<std::size_t>(config_.input);
    const std::size_t O = static_cast<std::size_t>(config_.output);
    if (dys.size() != caches_.size()) throw Error("predictor: backward window length mismatch");

    std::vector<std::vector<T>> dxs(dys.size(), std::vector<T>(I, T(0)));
    std::vector<T> dh_next(H, T(0)), dc_next(H, T(0)), dh(H), da(4 * H);
    for (std::size_t t = dys.size(); t-- > 0;) {
      const StepCache& k = caches_[t];
      const std::vector<T>& dy = dys[t];
      for (std::size_t o = 0; o < O; ++o) {
        b_out_.grad[o] += dy[o];
        for (std::size_t j = 0; j < H; ++j) w_out_.grad[o * H + j] += dy[o] * k.h[j];
      }
      for (std::size_t j = 0; j < H; ++j) {
        T acc = dh_next[j];
        for (std::size_t o = 0; o < O; ++o) acc += w_out_.value[o * H + j] * dy[o];
        dh[j] = acc;
      }
      for (std::size_t j = 0; j < H; ++j) {
        const T i = k.gates[j], f = k.gates[H + j], o = k.gates[2 * H + j], g = k.gates[3 * H + j];
        const T tc = k.tanh_c[j];
        const T d_o = dh[j] * tc;
        const T dc = dh[j] * o * (T(1) - tc * tc) + dc_next[j];
        da[j] = dc * g * i * (T(1) - i);
        da[H + j] = dc * k.c_prev[j] * f * (T(1) - f);
        da[2 * H + j] = d_o * o * (T(1) - o);
        da[3 * H + j] = dc * i * (T(1) - g * g);
        dc_next[j] = dc * f;
      }
      std::fill(dh_next.begin(), dh_next.end(), T(0));
      std::vector<T>& dx = dxs[t];
      for (std::size_t r = 0; r < 4 * H; ++r) {
        const T a = da[r];
        b_.grad[r] += a;
        T* gx = &w_x_.grad.data[r * I];
        const T* wx = &w_x_.value.data[r * I];
        for (std::size_t c = 0; c < I; ++c) {
          gx[c] += a * k.x[c];
          dx[c] += wx[c] * a;
        }
        T* gh = &w_h_.grad.data[r * H];
        const T* wh = &w_h_.value.data[r * H];
        for (std::size_t c = 0; c < H; ++c) {
          gh[c] += a * k.h_prev[c];
          dh_next[c] += wh[c] * a;
        }
      }
    }
    return dxs;
  }

 private:
  struct StepCache {
    std::vector<T> x, h_prev, c_prev, gates, tanh_c, h;
  };

  static T sigmoid(T v) { return T(1) / (T(1) + std::exp(-v)); }

  std::vector<T> forward_step(std::span<const T> x, RecurrentState<T>& state, StepCache& cache) const {
    const std::size_t H = static_cast<std::size_t>(config_.hidden);
    const std::size_t I = static_cast<std::size_t>(config_.input);
    const std::size_t O = static_cast<std::size_t>(config_.output);
    if (x.size() != I) throw Error("predictor: input dimension mismatch");

    cache.x.assign(x.begin(), x.end());
    cache.h_prev = state.h;
    cache.c_prev = state.c;
    cache.gates.resize(4 * H);
    for (std::size_t r = 0; r < 4 * H; ++r) {
      T a = b_.value[r];
      const T* wx = &w_x_.value.data[r * I];
      for (std::size_t c = 0; c < I; ++c) a += wx[c] * x[c];
      const T* wh = &w_h_.value.data[r * H];
      for (std::size_t c = 0; c < H; ++c) a += wh[c] * state.h[c];
      cache.gates[r] = r < 3 * H ? sigmoid(a) : std::tanh(a);
    }
    cache.tanh_c.resize(H);
    for (std::size_t j = 0; j < H; ++j) {
      const T c = cache.gates[H + j] * state.c[j] + cache.gates[j] * cache.gates[3 * H + j];
      state.c[j] = c;
      cache.tanh_c[j] = std::tanh(c);
      state.h[j] = cache.gates[2 * H + j] * cache.tanh_c[j];
    }
    cache.h = state.h;

    std::vector<T> y(O);
    for (std::size_t o = 0; o < O; ++o) {
      T acc = b_out_.value[o];
      for (std::size_t j = 0; j < H; ++j) acc += w_out_.value[o * H + j] * state.h[j];
      y[o] = acc;
    }
    return y;
  }

  PredictorConfig config_;
  Param<T> w_x_;
  Param<T> w_h_;
  Param<T> b_;
  Param<T> w_out_;
  Param<T> b_out_;
  std::vector<StepCache> caches_;
};

}  // namespace skl::learner

#endif  // SKL_LEARNER_PREDICTOR_HPP_
