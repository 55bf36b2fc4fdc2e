// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/learner/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>

#include "skl/common/log.hpp"
#include "skl/learner/model_io.hpp"

namespace skl::learner {

std::string_view to_string(Modality m) { return m == Modality::kRgb ? "rgb" : "disparity"; }

Modality parse_modality(std::string_view s) {
  if (s == "rgb") return Modality::kRgb;
  if (s == "disparity") return Modality::kDisparity;
  throw Error("invalid modality '" + std::string(s) + "' (expected rgb|disparity)");
}

ImageNorm image_norm(const dataset::NormStats& stats, Modality m) {
  if (m == Modality::kRgb) {
    return {{stats.image_mean.begin(), stats.image_mean.end()}, {stats.image_std.begin(), stats.image_std.end()}};
  }
  return {{stats.disp_mean}, {stats.disp_std}};
}

// ---------------------------------------------------------------------------
// ImageEncoder

namespace {

int channels_of(Modality m) { return m == Modality::kRgb ? 3 : 1; }

AeConfig with_channels(AeConfig c, Modality m) {
  c.channels = channels_of(m);
  return c;
}

}  // namespace

ImageEncoder::ImageEncoder(Modality modality, AeConfig config, ImageNorm norm, int frame_width, int frame_height)
    : modality_(modality),
      norm_(std::move(norm)),
      frame_width_(frame_width),
      frame_height_(frame_height),
      ae_(with_channels(std::move(config), modality), std::string("ae_") + std::string(to_string(modality))) {
  const int size = ae_.config().size;
  if (frame_width % size != 0 || frame_height != frame_width) {
    throw Error("encoder: frame size must be square and a multiple of the model input size");
  }
  const auto channels = static_cast<std::size_t>(channels_of(modality));
  if (norm_.mean.size() != channels || norm_.stdev.size() != channels) throw Error("encoder: norm size mismatch");
}

Tensor<float> ImageEncoder::preprocess(const FrameView& frame) const {
  const int size = ae_.config().size;
  const int factor = frame_width_ / size;
  const int channels = channels_of(modality_);
  const std::size_t pixels = static_cast<std::size_t>(frame_width_) * frame_height_;
  if (modality_ == Modality::kRgb && frame.rgb.size() != pixels * 3) throw Error("encoder: rgb frame size mismatch");
  if (modality_ == Modality::kDisparity && frame.disparity.size() != pixels) {
    throw Error("encoder: disparity frame size mismatch");
  }

  Tensor<float> x({channels, size, size});
  const double inv_area = 1.0 / (factor * factor);
  for (int c = 0; c < channels; ++c) {
    const double mean = norm_.mean[static_cast<std::size_t>(c)];
    const double inv_std = 1.0 / norm_.stdev[static_cast<std::size_t>(c)];
    for (int y = 0; y < size; ++y) {
      for (int xx = 0; xx < size; ++xx) {
        double acc = 0.0;
        for (int dy = 0; dy < factor; ++dy) {
          for (int dx = 0; dx < factor; ++dx) {
            const std::size_t p = static_cast<std::size_t>(y * factor + dy) * frame_width_ + (xx * factor + dx);
            const double raw = modality_ == Modality::kRgb ? frame.rgb[p * 3 + static_cast<std::size_t>(c)] / 255.0
                                                           : static_cast<double>(frame.disparity[p]);
            acc += (raw - mean) * inv_std;
          }
        }
        x.data[(static_cast<std::size_t>(c) * size + y) * size + xx] = static_cast<float>(acc * inv_area);
      }
    }
  }
  return x;
}

std::vector<float> ImageEncoder::encode(const FrameView& frame) const {
  return ae_.encode_const(preprocess(frame)).data;
}

void ImageEncoder::save(const std::filesystem::path& path) {
  const nlohmann::json meta = {
      {"kind", "encoder"},
      {"modality", std::string(to_string(modality_))},
      {"ae", to_json(ae_.config())},
      {"norm", {{"mean", norm_.mean}, {"std", norm_.stdev}}},
      {"frame_width", frame_width_},
      {"frame_height", frame_height_},
  };
  save_model(path, meta, ae_.params());
}

ImageEncoder ImageEncoder::load(const std::filesystem::path& path) {
  const ModelFile file = load_model(path);
  try {
    const auto& m = file.meta;
    if (m.at("kind") != "encoder") throw FormatError(path.string() + ": not an encoder model");
    ImageEncoder enc(parse_modality(m.at("modality").get<std::string>()), ae_config_from_json(m.at("ae")),
                     ImageNorm{m.at("norm").at("mean").get<std::vector<double>>(),
                               m.at("norm").at("std").get<std::vector<double>>()},
                     m.at("frame_width").get<int>(), m.at("frame_height").get<int>());
    assign_params(file, enc.ae_.params());
    return enc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Autoencoder training

namespace {

template <typename T>
void check_finite(double loss, int epoch, const ParamList<T>& params, std::string_view what) {
  if (std::isfinite(loss)) return;
  std::string layer = first_non_finite(params);
  if (layer.empty()) layer = "activations";
  throw NumericError("non-finite " + std::string(what) + " loss at epoch " + std::to_string(epoch) + " (layer " +
                     layer + ")");
}

}  // namespace

AeTrainResult train_autoencoder(std::span<const dataset::Episode> episodes, Modality modality,
                                const AeTrainConfig& config) {
  if (config.epochs < 0 || config.batch <= 0 || config.frame_stride <= 0) throw Error("autoencoder: bad train config");
  if (episodes.empty()) throw Error("autoencoder: no episodes");
  const dataset::NormStats stats = dataset::compute_norm_stats(episodes);
  AeTrainResult result{ImageEncoder(modality, config.arch, image_norm(stats, modality), episodes.front().width,
                                     episodes.front().height),
                        {}};
  ImageEncoder& encoder = result.encoder;
  Autoencoder<float>& ae = encoder.autoencoder();
  ae.init(config.seed);

  std::vector<Tensor<float>> frames;
  for (const auto& ep : episodes) {
    for (std::size_t t = 0; t < ep.steps.size(); t += static_cast<std::size_t>(config.frame_stride)) {
      frames.push_back(encoder.preprocess(view_of(ep.steps[t])));
    }
  }
  if (frames.size() < 100) {
    throw Error("autoencoder: need at least 100 frames, have " + std::to_string(frames.size()));
  }

  const ParamList<float> params = ae.params();
  Adam<float> adam(params, config.adam);
  std::mt19937_64 rng(config.seed ^ 0xAE0AE0ull);
  std::vector<std::size_t> order(frames.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t elements = frames.front().size();

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch));
      zero_grads(params);
      double batch_loss = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        batch_loss += ae.accumulate_reconstruction(frames[order[i]], (end - start) * elements);
      }
      check_finite(batch_loss, epoch, params, "reconstruction");
      loss_sum += batch_loss;
      adam.step();
    }
    result.loss_curve.push_back(loss_sum / static_cast<double>(frames.size()));
    log::debug("ae ", to_string(modality), " epoch ", epoch, " loss ", result.loss_curve.back());
  }
  const std::string bad = first_non_finite(params);
  if (!bad.empty()) throw NumericError("non-finite parameter '" + bad + "' after training");
  return result;
}

// ---------------------------------------------------------------------------
// Policy

Policy::Policy(sim::Variant variant, dataset::NormStats stats, PredictorConfig config, int latent_rgb, int latent_disp)
    : variant_(variant),
      stats_(std::move(stats)),
      latent_rgb_(latent_rgb),
      latent_disp_(latent_disp),
      predictor_(config) {
  const std::size_t expected_dim = sim::kNumJoints + (variant == sim::Variant::kLong ? dataset::kCommandDim : 0);
  if (stats_.state_dim() != expected_dim || stats_.has_command != (variant == sim::Variant::kLong)) {
    throw Error("policy: normalization statistics do not match the variant");
  }
  if (config.output != static_cast<int>(expected_dim) ||
      config.input != latent_rgb + latent_disp + static_cast<int>(expected_dim)) {
    throw Error("policy: predictor dimensions do not match the variant");
  }
}

void Policy::check_encoders(const ImageEncoder& rgb, const ImageEncoder& disp) const {
  if (rgb.modality() != Modality::kRgb || disp.modality() != Modality::kDisparity) {
    throw Error("policy: encoder modalities swapped");
  }
  if (rgb.latent_dim() != latent_rgb_ || disp.latent_dim() != latent_disp_) {
    throw Error("policy: encoder latent size mismatch");
  }
}

std::vector<float> Policy::make_input(std::span<const float> z_rgb, std::span<const float> z_disp,
                                      std::span<const double> state_norm) const {
  if (static_cast<int>(z_rgb.size()) != latent_rgb_ || static_cast<int>(z_disp.size()) != latent_disp_ ||
      state_norm.size() != state_dim()) {
    throw Error("policy: input dimension mismatch (variant " + std::string(sim::to_string(variant_)) + ", state dim " +
                std::to_string(state_dim()) + ", got " + std::to_string(state_norm.size()) + ")");
  }
  std::vector<float> x;
  x.reserve(z_rgb.size() + z_disp.size() + state_norm.size());
  x.insert(x.end(), z_rgb.begin(), z_rgb.end());
  x.insert(x.end(), z_disp.begin(), z_disp.end());
  for (double v : state_norm) x.push_back(static_cast<float>(v));
  return x;
}

std::vector<double> Policy::predict_next(const ImageEncoder& rgb, const ImageEncoder& disp, const FrameView& frame,
                                         std::span<const double> state_norm, RecurrentState<float>& hidden) const {
  const std::vector<float> x = make_input(rgb.encode(frame), disp.encode(frame), state_norm);
  const std::vector<float> y = predictor_.step(x, hidden);
  return {y.begin(), y.end()};
}

void Policy::save(const std::filesystem::path& path) {
  const nlohmann::json meta = {
      {"kind", "policy"},
      {"variant", std::string(sim::to_string(variant_))},
      {"predictor", to_json(predictor_.config())},
      {"latent_rgb", latent_rgb_},
      {"latent_disp", latent_disp_},
      {"norm", dataset::to_json(stats_)},
  };
  save_model(path, meta, predictor_.params());
}

Policy Policy::load(const std::filesystem::path& path) {
  const ModelFile file = load_model(path);
  try {
    const auto& m = file.meta;
    if (m.at("kind") != "policy") throw FormatError(path.string() + ": not a policy model");
    Policy p(sim::parse_variant(m.at("variant").get<std::string>()), dataset::norm_stats_from_json(m.at("norm")),
             predictor_config_from_json(m.at("predictor")), m.at("latent_rgb").get<int>(),
             m.at("latent_disp").get<int>());
    assign_params(file, p.predictor_.params());
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Predictor training

namespace {

struct Sequence {
  const dataset::Episode* episode = nullptr;
  std::vector<std::vector<double>> states;  // normalized, one per step
  std::vector<std::vector<float>> z_rgb;
  std::vector<std::vector<float>> z_disp;
};

}  // namespace

PredictorTrainResult train_predictor(std::span<const dataset::Episode> episodes, ImageEncoder& rgb,
                                     ImageEncoder& disp, const PredictorTrainConfig& config) {
  if (config.epochs < 0 || config.window <= 0 || config.hidden <= 0) throw Error("predictor: bad train config");
  if (episodes.empty()) throw Error("predictor: no episodes");
  const sim::Variant variant = episodes.front().variant;
  const dataset::NormStats stats = dataset::compute_norm_stats(episodes);
  const int d_s = static_cast<int>(stats.state_dim());

  std::vector<Sequence> seqs;
  for (const auto& ep : episodes) {
    if (ep.steps.size() < 2) {
      log::warn("skipping episode seed ", ep.seed, ": fewer than 2 steps");
      continue;
    }
    Sequence s;
    s.episode = &ep;
    for (const auto& step : ep.steps) {
      s.states.push_back(stats.normalize_state(dataset::step_state(step)));
      s.z_rgb.push_back(rgb.encode(view_of(step)));
      s.z_disp.push_back(disp.encode(view_of(step)));
    }
    seqs.push_back(std::move(s));
  }
  if (seqs.size() < 2) throw Error("predictor: need at least 2 episodes with 2+ steps");

  PredictorConfig arch{rgb.latent_dim() + disp.latent_dim() + d_s, config.hidden, d_s};
  PredictorTrainResult result{Policy(variant, stats, arch, rgb.latent_dim(), disp.latent_dim()), {}};
  Predictor<float>& predictor = result.policy.predictor();
  predictor.init(config.seed);
  result.policy.check_encoders(rgb, disp);

  const ParamList<float> params = predictor.params();
  Adam<float> adam(params, config.adam);
  ParamList<float> enc_params;
  if (config.finetune_encoders) {
    enc_params = rgb.autoencoder().encoder_params();
    const ParamList<float> more = disp.autoencoder().encoder_params();
    enc_params.insert(enc_params.end(), more.begin(), more.end());
  }
  Adam<float> enc_adam(enc_params, config.adam);

  std::mt19937_64 rng(config.seed ^ 0x9E3779B9ull);
  std::vector<std::size_t> order(seqs.size());
  std::iota(order.begin(), order.end(), 0);
  const auto window = static_cast<std::size_t>(config.window);
  const auto lr = static_cast<std::size_t>(rgb.latent_dim());
  const auto ld = static_cast<std::size_t>(disp.latent_dim());

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double sq_sum = 0.0;
    std::size_t count = 0;
    for (std::size_t e : order) {
      Sequence& seq = seqs[e];
      const std::size_t pairs = seq.states.size() - 1;
      RecurrentState<float> hidden = predictor.zero_state();
      for (std::size_t start = 0; start < pairs; start += window) {
        const std::size_t end = std::min(pairs, start + window);
        std::vector<std::vector<float>> xs;
        std::vector<std::vector<float>> targets;
        for (std::size_t t = start; t < end; ++t) {
          if (config.finetune_encoders) {
            const FrameView frame = view_of(seq.episode->steps[t]);
            seq.z_rgb[t] = rgb.encode(frame);
            seq.z_disp[t] = disp.encode(frame);
          }
          xs.push_back(result.policy.make_input(seq.z_rgb[t], seq.z_disp[t], seq.states[t]));
          targets.emplace_back(seq.states[t + 1].begin(), seq.states[t + 1].end());
        }
        zero_grads(params);
        const auto ys = predictor.forward_window(xs, hidden);
        const std::size_t n = (end - start) * static_cast<std::size_t>(d_s);
        std::vector<std::vector<float>> dys(ys.size(), std::vector<float>(static_cast<std::size_t>(d_s)));
        double window_sq = 0.0;
        for (std::size_t k = 0; k < ys.size(); ++k) {
          window_sq += loss_mse<float>(targets[k], ys[k]) * d_s;
          loss_mse_grad<float>(targets[k], ys[k], n, dys[k]);
        }
        check_finite(window_sq, epoch, params, "prediction");
        sq_sum += window_sq;
        count += n;
        const auto dxs = predictor.backward_window(dys);

        if (config.finetune_encoders) {
          zero_grads(enc_params);
          for (std::size_t k = 0; k < dxs.size(); ++k) {
            const FrameView frame = view_of(seq.episode->steps[start + k]);
            Tensor<float> dz_rgb({static_cast<int>(lr)});
            Tensor<float> dz_disp({static_cast<int>(ld)});
            std::copy_n(dxs[k].begin(), lr, dz_rgb.data.begin());
            std::copy_n(dxs[k].begin() + static_cast<std::ptrdiff_t>(lr), ld, dz_disp.data.begin());
            rgb.autoencoder().encode(rgb.preprocess(frame));
            rgb.autoencoder().encode_backward(dz_rgb);
            disp.autoencoder().encode(disp.preprocess(frame));
            disp.autoencoder().encode_backward(dz_disp);
          }
          enc_adam.step();
        }
        adam.step();
      }
    }
    result.loss_curve.push_back(sq_sum / static_cast<double>(count));
    if (epoch % 100 == 0) log::info("predictor epoch ", epoch, " loss ", result.loss_curve.back());
  }
  const std::string bad = first_non_finite(params);
  if (!bad.empty()) throw NumericError("non-finite parameter '" + bad + "' after training");
  return result;
}

void write_loss_csv(const std::filesystem::path& path, std::span<const double> curve) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "epoch,loss\n" << std::setprecision(17);
  for (std::size_t i = 0; i < curve.size(); ++i) out << i << ',' << curve[i] << '\n';
}

}  // namespace skl::learner
