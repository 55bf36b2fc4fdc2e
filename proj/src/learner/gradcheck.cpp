// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/learner/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "skl/learner/autoencoder.hpp"
#include "skl/learner/layers.hpp"
#include "skl/learner/loss.hpp"
#include "skl/learner/predictor.hpp"

namespace skl::learner {
namespace {

using LossFn = std::function<double()>;

Tensor<double> random_tensor(std::vector<int> shape, std::mt19937_64& rng, double scale = 1.0) {
  Tensor<double> t(std::move(shape));
  std::uniform_real_distribution<double> u(-scale, scale);
  for (double& v : t.data) v = u(rng);
  return t;
}

/// Compares `analytic` with central differences of `loss` over `values`.
GradcheckEntry compare(std::string check, std::string tensor, std::vector<double>& values,
                       const std::vector<double>& analytic, const LossFn& loss, const GradcheckOptions& opt) {
  GradcheckEntry e{std::move(check), std::move(tensor), values.size(), 0.0, true};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double saved = values[i];
    values[i] = saved + opt.step;
    const double plus = loss();
    values[i] = saved - opt.step;
    const double minus = loss();
    values[i] = saved;
    const double numeric = (plus - minus) / (2.0 * opt.step);
    e.max_error = std::max(e.max_error, relative_error(analytic[i], numeric, opt.denominator_floor));
  }
  e.passed = e.max_error < opt.tolerance;
  return e;
}

/// Checks every parameter gradient; `analytic` must zero and refill grads.
void check_params(std::vector<GradcheckEntry>& out, const std::string& check, const ParamList<double>& params,
                  const std::function<void()>& analytic, const LossFn& loss, const GradcheckOptions& opt) {
  zero_grads(params);
  analytic();
  for (Param<double>* p : params) out.push_back(compare(check, p->name, p->value.data, p->grad.data, loss, opt));
}

void check_autoencoder(std::vector<GradcheckEntry>& out, std::uint64_t seed, const GradcheckOptions& opt) {
  std::mt19937_64 rng(seed);
  const AeConfig cfg{3, 4, {3, 4}, 3};
  Autoencoder<double> ae(cfg, "ae_mini");
  ae.init(seed);
  // Zero-initialized biases put rectifier inputs exactly on the kink when an
  // upstream unit is dead; offset everything so no input sits at zero.
  for (Param<double>* p : ae.params()) {
    for (double& v : p->value.data) v += std::uniform_real_distribution<double>(-0.2, 0.2)(rng);
  }
  const Tensor<double> x = random_tensor({3, 4, 4}, rng);
  const LossFn loss = [&] { return loss_mse<double>(x.span(), ae.reconstruct(x).span()); };
  check_params(out, "autoencoder", ae.params(), [&] { ae.accumulate_reconstruction(x, x.size()); }, loss, opt);
}

void check_predictor(std::vector<GradcheckEntry>& out, std::uint64_t seed, const GradcheckOptions& opt) {
  std::mt19937_64 rng(seed + 1);
  const PredictorConfig cfg{4, 3, 2};
  constexpr int kSteps = 5;
  Predictor<double> pred(cfg);
  pred.init(seed);
  // Non-zero biases and incoming state so every gate term contributes.
  for (Param<double>* p : pred.params()) {
    for (double& v : p->value.data) v += std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
  }
  std::vector<std::vector<double>> xs(kSteps), targets(kSteps);
  for (int t = 0; t < kSteps; ++t) {
    xs[t] = random_tensor({cfg.input}, rng).data;
    targets[t] = random_tensor({cfg.output}, rng).data;
  }
  RecurrentState<double> init{random_tensor({cfg.hidden}, rng, 0.5).data, random_tensor({cfg.hidden}, rng, 0.5).data};
  const std::size_t n = static_cast<std::size_t>(kSteps * cfg.output);

  const LossFn loss = [&] {
    RecurrentState<double> s = init;
    double sum = 0.0;
    for (int t = 0; t < kSteps; ++t) {
      const std::vector<double> y = pred.step(xs[t], s);
      sum += loss_mse<double>(targets[t], y) * cfg.output;
    }
    return sum / static_cast<double>(n);
  };
  std::vector<std::vector<double>> dxs;
  const auto analytic = [&] {
    RecurrentState<double> s = init;
    const auto ys = pred.forward_window(xs, s);
    std::vector<std::vector<double>> dys(kSteps, std::vector<double>(static_cast<std::size_t>(cfg.output)));
    for (int t = 0; t < kSteps; ++t) loss_mse_grad<double>(targets[t], ys[t], n, dys[t]);
    dxs = pred.backward_window(dys);
  };
  check_params(out, "recurrent", pred.params(), analytic, loss, opt);
  for (int t = 0; t < kSteps; ++t) {
    out.push_back(compare("recurrent", "input[" + std::to_string(t) + "]", xs[t], dxs[t], loss, opt));
  }
}

void check_loss(std::vector<GradcheckEntry>& out, std::uint64_t seed, const GradcheckOptions& opt) {
  std::mt19937_64 rng(seed + 2);
  const Tensor<double> target = random_tensor({10}, rng);
  Tensor<double> pred = random_tensor({10}, rng);
  Tensor<double> analytic({10});
  loss_mse_grad<double>(target.span(), pred.span(), pred.size(), analytic.span());
  // Quadratic loss: central differences are exact up to rounding, so the
  // comparison is absolute.
  GradcheckEntry e{"loss_mse", "prediction", pred.size(), 0.0, true};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double saved = pred[i];
    pred[i] = saved + opt.step;
    const double plus = loss_mse<double>(target.span(), pred.span());
    pred[i] = saved - opt.step;
    const double minus = loss_mse<double>(target.span(), pred.span());
    pred[i] = saved;
    e.max_error = std::max(e.max_error, std::abs(analytic[i] - (plus - minus) / (2.0 * opt.step)));
  }
  e.passed = e.max_error < opt.loss_tolerance;
  out.push_back(e);
}

/// Single-layer checks: loss = mse(target, f(x)) with both parameter and
/// input gradients compared.
template <typename Forward, typename Backward>
void check_layer(std::vector<GradcheckEntry>& out, const std::string& name, ParamList<double> params,
                 Tensor<double>& x, const Tensor<double>& target, Forward forward, Backward backward,
                 const GradcheckOptions& opt) {
  const LossFn loss = [&] { return loss_mse<double>(target.span(), forward(x).span()); };
  Tensor<double> dx;
  const auto analytic = [&] {
    const Tensor<double> y = forward(x);
    Tensor<double> dy(y.shape);
    loss_mse_grad<double>(target.span(), y.span(), y.size(), dy.span());
    dx = backward(dy);
  };
  check_params(out, name, params, analytic, loss, opt);
  out.push_back(compare(name, "input", x.data, dx.data, loss, opt));
}

void check_layers(std::vector<GradcheckEntry>& out, std::uint64_t seed, const GradcheckOptions& opt) {
  std::mt19937_64 rng(seed + 3);
  {
    Conv2d<double> conv("conv_s2", 2, 3, 3, 2, 1);
    conv.init(rng);
    Tensor<double> x = random_tensor({2, 5, 5}, rng);
    const Tensor<double> target = random_tensor({3, 3, 3}, rng);
    check_layer(
        out, "conv_stride2", conv.params(), x, target, [&](const Tensor<double>& in) { return conv.forward(in); },
        [&](const Tensor<double>& dy) { return conv.backward(dy); }, opt);
  }
  {
    Conv2d<double> conv("conv_s1", 3, 2, 3, 1, 1);
    conv.init(rng);
    Tensor<double> x = random_tensor({3, 4, 4}, rng);
    const Tensor<double> target = random_tensor({2, 4, 4}, rng);
    check_layer(
        out, "conv_stride1", conv.params(), x, target, [&](const Tensor<double>& in) { return conv.forward(in); },
        [&](const Tensor<double>& dy) { return conv.backward(dy); }, opt);
  }
  {
    Dense<double> dense("dense", 6, 4);
    dense.init(rng);
    Tensor<double> x = random_tensor({6}, rng);
    const Tensor<double> target = random_tensor({4}, rng);
    check_layer(
        out, "dense", dense.params(), x, target, [&](const Tensor<double>& in) { return dense.forward(in); },
        [&](const Tensor<double>& dy) { return dense.backward(dy); }, opt);
  }
  {
    // Rectifier then upsample; inputs kept away from the kink so the
    // finite difference never straddles zero.
    Relu<double> relu;
    Upsample2x<double> up;
    Tensor<double> x = random_tensor({2, 3, 3}, rng);
    for (double& v : x.data) v += v >= 0 ? 0.1 : -0.1;
    const Tensor<double> target = random_tensor({2, 6, 6}, rng);
    check_layer(
        out, "relu_upsample", {}, x, target, [&](const Tensor<double>& in) { return up.forward(relu.forward(in)); },
        [&](const Tensor<double>& dy) { return relu.backward(up.backward(dy)); }, opt);
  }
}

}  // namespace

GradcheckKind parse_gradcheck_kind(std::string_view s) {
  if (s == "all") return GradcheckKind::kAll;
  if (s == "autoencoder") return GradcheckKind::kAutoencoder;
  if (s == "predictor") return GradcheckKind::kPredictor;
  if (s == "loss") return GradcheckKind::kLoss;
  if (s == "layers") return GradcheckKind::kLayers;
  throw Error("invalid gradcheck model '" + std::string(s) + "' (expected all|autoencoder|predictor|loss|layers)");
}

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

GradcheckReport gradcheck(GradcheckKind kind, std::uint64_t seed, const GradcheckOptions& options) {
  GradcheckReport report;
  const bool all = kind == GradcheckKind::kAll;
  if (all || kind == GradcheckKind::kLoss) check_loss(report.entries, seed, options);
  if (all || kind == GradcheckKind::kLayers) check_layers(report.entries, seed, options);
  if (all || kind == GradcheckKind::kAutoencoder) check_autoencoder(report.entries, seed, options);
  if (all || kind == GradcheckKind::kPredictor) check_predictor(report.entries, seed, options);
  for (const auto& e : report.entries) {
    if (e.check != "loss_mse") report.max_rel_error = std::max(report.max_rel_error, e.max_error);
    report.passed = report.passed && e.passed;
  }
  return report;
}

}  // namespace skl::learner
