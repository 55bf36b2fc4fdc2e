// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Layers with hand-written reverse passes. Each layer caches what its
// backward pass needs from the most recent forward call, so forward/backward
// must alternate one sample at a time. Parameter gradients accumulate until
// zero_grads is called.

#ifndef SKL_LEARNER_LAYERS_HPP_
#define SKL_LEARNER_LAYERS_HPP_

#include <algorithm>
#include <cmath>
#include <random>

#include "skl/learner/tensor.hpp"

namespace skl::learner {

/// Square-kernel 2D convolution over a CHW tensor.
template <typename T>
class Conv2d {
 public:
  Conv2d(std::string name, int in_ch, int out_ch, int kernel, int stride, int pad)
      : weight_(name + ".weight", {out_ch, in_ch, kernel, kernel}),
        bias_(name + ".bias", {out_ch}),
        in_ch_(in_ch),
        out_ch_(out_ch),
        k_(kernel),
        stride_(stride),
        pad_(pad) {}

  [[nodiscard]] int out_size(int in_size) const { return (in_size + 2 * pad_ - k_) / stride_ + 1; }

  void init(std::mt19937_64& rng) {
    const double bound = std::sqrt(6.0 / (in_ch_ * k_ * k_));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (auto& w : weight_.value.data) w = static_cast<T>(u(rng));
    bias_.value.zero();
  }

  Tensor<T> forward(const Tensor<T>& x) {
    input_ = x;
    return apply(x);
  }

  /// Forward pass without caching.
  Tensor<T> apply(const Tensor<T>& x) const {
    if (x.shape.size() != 3 || x.shape[0] != in_ch_) throw Error("conv " + weight_.name + ": input shape mismatch");
    const int h = x.shape[1];
    const int w = x.shape[2];
    const int oh = out_size(h);
    const int ow = out_size(w);
    Tensor<T> y({out_ch_, oh, ow});
    for (int oc = 0; oc < out_ch_; ++oc) {
      T* out = &y.data[static_cast<std::size_t>(oc) * oh * ow];
      std::fill(out, out + static_cast<std::size_t>(oh) * ow, bias_.value[oc]);
      for (int ic = 0; ic < in_ch_; ++ic) {
        const T* in = &x.data[static_cast<std::size_t>(ic) * h * w];
        for (int ky = 0; ky < k_; ++ky) {
          for (int kx = 0; kx < k_; ++kx) {
            const T wv = weight_.value[((static_cast<std::size_t>(oc) * in_ch_ + ic) * k_ + ky) * k_ + kx];
            for (int oy = 0; oy < oh; ++oy) {
              const int iy = oy * stride_ + ky - pad_;
              if (iy < 0 || iy >= h) continue;
              const auto [ox0, ox1] = valid_range(kx, w, ow);
              T* orow = out + static_cast<std::size_t>(oy) * ow;
              const T* irow = in + static_cast<std::size_t>(iy) * w + (kx - pad_);
              for (int ox = ox0; ox < ox1; ++ox) orow[ox] += wv * irow[ox * stride_];
            }
          }
        }
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) {
    const Tensor<T>& x = input_;
    const int h = x.shape[1];
    const int w = x.shape[2];
    const int oh = dy.shape[1];
    const int ow = dy.shape[2];
    Tensor<T> dx(x.shape);
    for (int oc = 0; oc < out_ch_; ++oc) {
      const T* g = &dy.data[static_cast<std::size_t>(oc) * oh * ow];
      T bsum = 0;
      for (std::size_t i = 0; i < static_cast<std::size_t>(oh) * ow; ++i) bsum += g[i];
      bias_.grad[oc] += bsum;
      for (int ic = 0; ic < in_ch_; ++ic) {
        const T* in = &x.data[static_cast<std::size_t>(ic) * h * w];
        T* din = &dx.data[static_cast<std::size_t>(ic) * h * w];
        for (int ky = 0; ky < k_; ++ky) {
          for (int kx = 0; kx < k_; ++kx) {
            const std::size_t wi = ((static_cast<std::size_t>(oc) * in_ch_ + ic) * k_ + ky) * k_ + kx;
            const T wv = weight_.value[wi];
            T wgrad = 0;
            for (int oy = 0; oy < oh; ++oy) {
              const int iy = oy * stride_ + ky - pad_;
              if (iy < 0 || iy >= h) continue;
              const auto [ox0, ox1] = valid_range(kx, w, ow);
              const T* grow = g + static_cast<std::size_t>(oy) * ow;
              const std::size_t base = static_cast<std::size_t>(iy) * w + (kx - pad_);
              const T* irow = in + base;
              T* drow = din + base;
              for (int ox = ox0; ox < ox1; ++ox) {
                wgrad += grow[ox] * irow[ox * stride_];
                drow[ox * stride_] += wv * grow[ox];
              }
            }
            weight_.grad[wi] += wgrad;
          }
        }
      }
    }
    return dx;
  }

  ParamList<T> params() { return {&weight_, &bias_}; }

 private:
  /// Output columns [ox0, ox1) whose input column ox*stride + kx - pad is in range.
  [[nodiscard]] std::pair<int, int> valid_range(int kx, int w, int ow) const {
    int ox0 = 0;
    while (ox0 < ow && ox0 * stride_ + kx - pad_ < 0) ++ox0;
    int ox1 = ow;
    while (ox1 > ox0 && (ox1 - 1) * stride_ + kx - pad_ >= w) --ox1;
    return {ox0, ox1};
  }

  Param<T> weight_;
  Param<T> bias_;
  int in_ch_;
  int out_ch_;
  int k_;
  int stride_;
  int pad_;
  Tensor<T> input_;
};

/// y = W x + b over the flattened input.
template <typename T>
class Dense {
 public:
  Dense(std::string name, int in, int out)
      : weight_(name + ".weight", {out, in}), bias_(name + ".bias", {out}), in_(in), out_(out) {}

  void init(std::mt19937_64& rng, double gain = 6.0) {
    const double bound = std::sqrt(gain / in_);
    std::uniform_real_distribution<double> u(-bound, bound);
    for (auto& w : weight_.value.data) w = static_cast<T>(u(rng));
    bias_.value.zero();
  }

  Tensor<T> forward(const Tensor<T>& x) {
    input_ = x;
    return apply(x);
  }

  Tensor<T> apply(const Tensor<T>& x) const {
    if (static_cast<int>(x.size()) != in_) throw Error("dense " + weight_.name + ": input size mismatch");
    Tensor<T> y({out_});
    for (int o = 0; o < out_; ++o) {
      const T* row = &weight_.value.data[static_cast<std::size_t>(o) * in_];
      T acc = bias_.value[o];
      for (int i = 0; i < in_; ++i) acc += row[i] * x.data[i];
      y[o] = acc;
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) {
    Tensor<T> dx(input_.shape);
    for (int o = 0; o < out_; ++o) {
      const T g = dy[o];
      bias_.grad[o] += g;
      T* grow = &weight_.grad.data[static_cast<std::size_t>(o) * in_];
      const T* row = &weight_.value.data[static_cast<std::size_t>(o) * in_];
      for (int i = 0; i < in_; ++i) {
        grow[i] += g * input_.data[i];
        dx.data[i] += g * row[i];
      }
    }
    return dx;
  }

  ParamList<T> params() { return {&weight_, &bias_}; }
  Param<T>& weight() { return weight_; }
  Param<T>& bias() { return bias_; }

 private:
  Param<T> weight_;
  Param<T> bias_;
  int in_;
  int out_;
  Tensor<T> input_;
};

template <typename T>
class Relu {
 public:
  Tensor<T> forward(Tensor<T> x) {
    mask_.assign(x.size(), false);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] > T(0)) {
        mask_[i] = true;
      } else {
        x[i] = T(0);
      }
    }
    return x;
  }

  static Tensor<T> apply(Tensor<T> x) {
    for (auto& v : x.data) v = std::max(v, T(0));
    return x;
  }

  Tensor<T> backward(Tensor<T> dy) const {
    for (std::size_t i = 0; i < dy.size(); ++i) {
      if (!mask_[i]) dy[i] = T(0);
    }
    return dy;
  }

 private:
  std::vector<bool> mask_;
};

/// Nearest-neighbor 2x upsampling of a CHW tensor.
template <typename T>
class Upsample2x {
 public:
  Tensor<T> forward(const Tensor<T>& x) const {
    const int c = x.shape[0], h = x.shape[1], w = x.shape[2];
    Tensor<T> y({c, 2 * h, 2 * w});
    for (int ch = 0; ch < c; ++ch) {
      for (int oy = 0; oy < 2 * h; ++oy) {
        for (int ox = 0; ox < 2 * w; ++ox) {
          y.data[(static_cast<std::size_t>(ch) * 2 * h + oy) * 2 * w + ox] =
              x.data[(static_cast<std::size_t>(ch) * h + oy / 2) * w + ox / 2];
        }
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) const {
    const int c = dy.shape[0], h = dy.shape[1] / 2, w = dy.shape[2] / 2;
    Tensor<T> dx({c, h, w});
    for (int ch = 0; ch < c; ++ch) {
      for (int oy = 0; oy < 2 * h; ++oy) {
        for (int ox = 0; ox < 2 * w; ++ox) {
          dx.data[(static_cast<std::size_t>(ch) * h + oy / 2) * w + ox / 2] +=
              dy.data[(static_cast<std::size_t>(ch) * 2 * h + oy) * 2 * w + ox];
        }
      }
    }
    return dx;
  }
};

}  // namespace skl::learner

#endif  // SKL_LEARNER_LAYERS_HPP_
