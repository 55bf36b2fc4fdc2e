// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Convolutional autoencoder:
//   encoder  conv(k3, s2, p1) + relu per stage -> dense -> latent (linear)
//   decoder  dense + relu -> per stage: 2x nearest upsample -> conv(k3, s1, p1)
//            (relu on all but the last, which is linear)

#ifndef SKL_LEARNER_AUTOENCODER_HPP_
#define SKL_LEARNER_AUTOENCODER_HPP_

#include <algorithm>
#include <memory>
#include <nlohmann/json.hpp>
#include <random>
#include <string>
#include <vector>

#include "skl/learner/layers.hpp"
#include "skl/learner/loss.hpp"

namespace skl::learner {

struct AeConfig {
  int channels = 3;
  /// Square input side; must be divisible by 2^widths.size().
  int size = 32;
  std::vector<int> widths = {8, 16, 32};
  int latent = 32;

  [[nodiscard]] int bottleneck_side() const { return size >> widths.size(); }
  [[nodiscard]] int bottleneck_size() const { return widths.back() * bottleneck_side() * bottleneck_side(); }
  void validate() const {
    if (channels <= 0 || size <= 0 || latent <= 0 || widths.empty()) throw Error("autoencoder: bad config");
    if ((bottleneck_side() << widths.size()) != size) throw Error("autoencoder: size not divisible by 2^stages");
  }
  friend bool operator==(const AeConfig&, const AeConfig&) = default;
};

inline nlohmann::json to_json(const AeConfig& c) {
  return {{"channels", c.channels}, {"size", c.size}, {"widths", c.widths}, {"latent", c.latent}};
}

inline AeConfig ae_config_from_json(const nlohmann::json& j) {
  AeConfig c;
  c.channels = j.at("channels").get<int>();
  c.size = j.at("size").get<int>();
  c.widths = j.at("widths").get<std::vector<int>>();
  c.latent = j.at("latent").get<int>();
  c.validate();
  return c;
}

template <typename T>
class Autoencoder {
 public:
  explicit Autoencoder(AeConfig config, const std::string& prefix = "ae") : config_(std::move(config)) {
    config_.validate();
    int in = config_.channels;
    for (std::size_t s = 0; s < config_.widths.size(); ++s) {
      enc_convs_.emplace_back(prefix + ".enc" + std::to_string(s), in, config_.widths[s], 3, 2, 1);
      in = config_.widths[s];
    }
    enc_relus_.resize(config_.widths.size());
    enc_dense_ = std::make_unique<Dense<T>>(prefix + ".enc_dense", config_.bottleneck_size(), config_.latent);
    dec_dense_ = std::make_unique<Dense<T>>(prefix + ".dec_dense", config_.latent, config_.bottleneck_size());
    for (std::size_t s = config_.widths.size(); s-- > 0;) {
      const int out = s == 0 ? config_.channels : config_.widths[s - 1];
      dec_convs_.emplace_back(prefix + ".dec" + std::to_string(config_.widths.size() - 1 - s), config_.widths[s], out, 3, 1, 1);
    }
    dec_relus_.resize(config_.widths.size());
  }

  [[nodiscard]] const AeConfig& config() const { return config_; }

  void init(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (auto& c : enc_convs_) c.init(rng);
    enc_dense_->init(rng, 3.0);
    dec_dense_->init(rng);
    for (auto& c : dec_convs_) c.init(rng);
  }

  ParamList<T> params() {
    ParamList<T> out;
    for (auto& c : enc_convs_) append(out, c.params());
    append(out, enc_dense_->params());
    append(out, dec_dense_->params());
    for (auto& c : dec_convs_) append(out, c.params());
    return out;
  }

  ParamList<T> encoder_params() {
    ParamList<T> out;
    for (auto& c : enc_convs_) append(out, c.params());
    append(out, enc_dense_->params());
    return out;
  }

  /// x: CHW tensor of shape (channels, size, size).
  Tensor<T> encode(const Tensor<T>& x) {
    Tensor<T> h = x;
    for (std::size_t s = 0; s < enc_convs_.size(); ++s) h = enc_relus_[s].forward(enc_convs_[s].forward(h));
    return enc_dense_->forward(h);
  }

  /// encode() without caching; safe on a shared model.
  Tensor<T> encode_const(const Tensor<T>& x) const {
    Tensor<T> h = x;
    for (const auto& conv : enc_convs_) h = Relu<T>::apply(conv.apply(h));
    return enc_dense_->apply(h);
  }

  /// Reverse of the most recent encode(); returns d loss / d x.
  Tensor<T> encode_backward(const Tensor<T>& dz) {
    Tensor<T> g = enc_dense_->backward(dz);
    const int side = config_.bottleneck_side();
    g.shape = {config_.widths.back(), side, side};
    for (std::size_t s = enc_convs_.size(); s-- > 0;) g = enc_convs_[s].backward(enc_relus_[s].backward(std::move(g)));
    return g;
  }

  Tensor<T> decode(const Tensor<T>& z) {
    Tensor<T> h = dec_relu0_.forward(dec_dense_->forward(z));
    const int side = config_.bottleneck_side();
    h.shape = {config_.widths.back(), side, side};
    for (std::size_t s = 0; s < dec_convs_.size(); ++s) {
      h = dec_convs_[s].forward(up_.forward(h));
      if (s + 1 < dec_convs_.size()) h = dec_relus_[s].forward(std::move(h));
    }
    return h;
  }

  Tensor<T> decode_backward(const Tensor<T>& dout) {
    Tensor<T> g = dout;
    for (std::size_t s = dec_convs_.size(); s-- > 0;) {
      if (s + 1 < dec_convs_.size()) g = dec_relus_[s].backward(std::move(g));
      g = up_.backward(dec_convs_[s].backward(g));
    }
    g = dec_dense_->backward(dec_relu0_.backward(std::move(g)));
    return g;
  }

  Tensor<T> reconstruct(const Tensor<T>& x) { return decode(encode(x)); }

  /// Reconstruction loss of one sample; accumulates parameter gradients of
  /// mean-over-`batch_elements` MSE. Returns the per-sample MSE.
  double accumulate_reconstruction(const Tensor<T>& x, std::size_t batch_elements) {
    const Tensor<T> y = reconstruct(x);
    const double loss = loss_mse<T>(x.span(), y.span());
    Tensor<T> dy(y.shape);
    loss_mse_grad<T>(x.span(), y.span(), batch_elements, dy.span());
    encode_backward(decode_backward(dy));
    return loss;
  }

 private:
  static void append(ParamList<T>& out, const ParamList<T>& more) { out.insert(out.end(), more.begin(), more.end()); }

  AeConfig config_;
  std::vector<Conv2d<T>> enc_convs_;
  std::vector<Relu<T>> enc_relus_;
  std::unique_ptr<Dense<T>> enc_dense_;
  std::unique_ptr<Dense<T>> dec_dense_;
  Relu<T> dec_relu0_;
  std::vector<Conv2d<T>> dec_convs_;
  std::vector<Relu<T>> dec_relus_;
  Upsample2x<T> up_;
};

}  // namespace skl::learner

#endif  // SKL_LEARNER_AUTOENCODER_HPP_
