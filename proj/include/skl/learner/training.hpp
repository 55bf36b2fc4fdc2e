// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Two-phase skill learning: image autoencoders first, then the recurrent
// next-state predictor on frozen encoder latents.

#ifndef SKL_LEARNER_TRAINING_HPP_
#define SKL_LEARNER_TRAINING_HPP_

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "skl/dataset/episode.hpp"
#include "skl/dataset/norm_stats.hpp"
#include "skl/learner/adam.hpp"
#include "skl/learner/autoencoder.hpp"
#include "skl/learner/predictor.hpp"

namespace skl::learner {

enum class Modality { kRgb, kDisparity };

std::string_view to_string(Modality m);
Modality parse_modality(std::string_view s);

/// Raw sensor images of one tick.
struct FrameView {
  std::span<const std::uint8_t> rgb;
  std::span<const float> disparity;
};

inline FrameView view_of(const dataset::Step& s) { return {s.rgb, s.disparity}; }

/// Per-channel standardization constants.
struct ImageNorm {
  std::vector<double> mean;
  std::vector<double> stdev;
};

ImageNorm image_norm(const dataset::NormStats& stats, Modality m);

/// Autoencoder plus the preprocessing that feeds it: standardize, then
/// average-pool from the sensor resolution down to the model input size.
class ImageEncoder {
 public:
  ImageEncoder(Modality modality, AeConfig config, ImageNorm norm, int frame_width, int frame_height);

  [[nodiscard]] Modality modality() const { return modality_; }
  [[nodiscard]] const ImageNorm& norm() const { return norm_; }
  [[nodiscard]] int latent_dim() const { return ae_.config().latent; }
  Autoencoder<float>& autoencoder() { return ae_; }
  [[nodiscard]] const Autoencoder<float>& autoencoder() const { return ae_; }

  [[nodiscard]] Tensor<float> preprocess(const FrameView& frame) const;
  [[nodiscard]] std::vector<float> encode(const FrameView& frame) const;

  void save(const std::filesystem::path& path);
  static ImageEncoder load(const std::filesystem::path& path);

 private:
  Modality modality_;
  ImageNorm norm_;
  int frame_width_;
  int frame_height_;
  Autoencoder<float> ae_;
};

struct AeTrainConfig {
  int epochs = 200;
  int batch = 16;
  /// Use every n-th step of each episode.
  int frame_stride = 2;
  std::uint64_t seed = 1;
  AdamConfig adam;
  AeConfig arch;  // channels are set from the modality
};

struct AeTrainResult {
  ImageEncoder encoder;
  /// Mean per-sample reconstruction MSE of each epoch.
  std::vector<double> loss_curve;
};

/// Throws skl::Error with fewer than 100 sampled frames and NumericError on
/// non-finite values.
AeTrainResult train_autoencoder(std::span<const dataset::Episode> episodes, Modality modality,
                                const AeTrainConfig& config);

/// Variant-tagged predictor with the state normalization it was trained on.
class Policy {
 public:
  Policy(sim::Variant variant, dataset::NormStats stats, PredictorConfig config, int latent_rgb, int latent_disp);

  [[nodiscard]] sim::Variant variant() const { return variant_; }
  [[nodiscard]] const dataset::NormStats& stats() const { return stats_; }
  [[nodiscard]] std::size_t state_dim() const { return stats_.state_dim(); }
  Predictor<float>& predictor() { return predictor_; }
  [[nodiscard]] const Predictor<float>& predictor() const { return predictor_; }

  /// Throws unless both encoders match the latent sizes this policy expects.
  void check_encoders(const ImageEncoder& rgb, const ImageEncoder& disp) const;

  /// [z_rgb, z_disp, state_norm]
  [[nodiscard]] std::vector<float> make_input(std::span<const float> z_rgb, std::span<const float> z_disp,
                                              std::span<const double> state_norm) const;

  /// One recurrent step from the current frame and normalized state to the
  /// predicted normalized next state.
  std::vector<double> predict_next(const ImageEncoder& rgb, const ImageEncoder& disp, const FrameView& frame,
                                   std::span<const double> state_norm, RecurrentState<float>& hidden) const;

  void save(const std::filesystem::path& path);
  static Policy load(const std::filesystem::path& path);

 private:
  sim::Variant variant_;
  dataset::NormStats stats_;
  int latent_rgb_;
  int latent_disp_;
  Predictor<float> predictor_;
};

struct PredictorTrainConfig {
  int epochs = 1000;
  /// Truncated BPTT window length.
  int window = 32;
  int hidden = 64;
  std::uint64_t seed = 1;
  AdamConfig adam;
  /// Also update the encoders through the predictor loss.
  bool finetune_encoders = false;
};

struct PredictorTrainResult {
  Policy policy;
  /// Normalized next-state MSE over all (t, t+1) pairs of each epoch.
  std::vector<double> loss_curve;
};

/// Throws skl::Error with fewer than two usable episodes.
PredictorTrainResult train_predictor(std::span<const dataset::Episode> episodes, ImageEncoder& rgb,
                                     ImageEncoder& disp, const PredictorTrainConfig& config);

/// "epoch,loss" rows, full precision.
void write_loss_csv(const std::filesystem::path& path, std::span<const double> curve);

}  // namespace skl::learner

#endif  // SKL_LEARNER_TRAINING_HPP_
