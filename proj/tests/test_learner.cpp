// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "skl/common/error.hpp"
#include "skl/learner/adam.hpp"
#include "skl/learner/gradcheck.hpp"
#include "skl/learner/loss.hpp"
#include "skl/learner/model_io.hpp"
#include "skl/learner/predictor.hpp"
#include "skl/learner/training.hpp"
#include "test_util.hpp"

namespace skl::learner {
namespace {

/// A cheap architecture for unit tests; acceptance runs the default one.
AeConfig tiny_ae() { return AeConfig{3, 16, {4, 8}, 8}; }

/// Synthetic episode: smoothly varying joints and a frame whose brightness
/// follows the first joint, so images carry state information.
dataset::Episode synthetic_episode(std::uint64_t seed, std::size_t steps, bool constant) {
  dataset::Episode ep;
  ep.scene = sim::make_scenario(sim::Variant::kShort, seed);
  ep.seed = seed;
  ep.outcome = dataset::Outcome::kDone;
  for (std::size_t t = 0; t < steps; ++t) {
    dataset::Step s;
    s.t = static_cast<std::uint32_t>(t);
    const double phase = constant ? 0.0 : 0.1 * static_cast<double>(t) + 0.3 * static_cast<double>(seed);
    for (std::size_t j = 0; j < sim::kNumJoints; ++j) s.state[j] = static_cast<float>(0.2 * std::sin(phase + j));
    s.rgb.assign(64 * 64 * 3, static_cast<std::uint8_t>(constant ? 100 : 128 + 100 * std::sin(phase)));
    for (std::size_t p = 0; p < s.rgb.size(); p += 3) s.rgb[p + 2] = static_cast<std::uint8_t>(p % 251);
    if (constant) std::fill(s.rgb.begin(), s.rgb.end(), std::uint8_t{100});
    s.disparity.assign(64 * 64, static_cast<float>(constant ? 2.0 : 2.0 + std::cos(phase)));
    ep.steps.push_back(std::move(s));
  }
  return ep;
}

std::vector<dataset::Episode> synthetic_corpus(std::size_t n, std::size_t steps, bool constant) {
  std::vector<dataset::Episode> eps;
  for (std::size_t i = 0; i < n; ++i) eps.push_back(synthetic_episode(i, steps, constant));
  return eps;
}

TEST(Loss, Examples) {
  const std::vector<double> a = {1, 0}, z = {0, 0};
  EXPECT_EQ(loss_mse<double>(z, z), 0.0);
  EXPECT_EQ(loss_mse<double>(a, z), 0.5);
  EXPECT_EQ(loss_mse<double>(a, z), loss_mse<double>(z, a));
  EXPECT_THROW(loss_mse<double>(a, std::vector<double>{0}), Error);
}

TEST(Loss, MatchesScalarLoopOracle) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(1 + trial * 7), b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = n(rng), b[i] = n(rng);
    EXPECT_NEAR(loss_mse<double>(a, b), oracle::mse(a, b), 1e-12);
    EXPECT_GE(loss_mse<double>(a, b), 0.0);
  }
}

TEST(Gradcheck, AllChecksPass) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const GradcheckReport r = gradcheck(GradcheckKind::kAll, seed);
    EXPECT_TRUE(r.passed) << "seed " << seed;
    EXPECT_LT(r.max_rel_error, 1e-4);
    bool has_conv = false, has_lstm = false, has_loss = false;
    for (const auto& e : r.entries) {
      EXPECT_TRUE(e.passed) << e.check << " " << e.tensor << " " << e.max_error;
      has_conv = has_conv || e.check == "conv_stride2";
      has_lstm = has_lstm || e.tensor == "lstm.w_h";
      if (e.check == "loss_mse") {
        has_loss = true;
        EXPECT_LT(e.max_error, 1e-10);
      }
    }
    EXPECT_TRUE(has_conv && has_lstm && has_loss);
  }
}

TEST(Gradcheck, DetectsWrongGradient) {
  EXPECT_GT(relative_error(1.0, 1.1, 1e-7), 1e-4);
  EXPECT_EQ(relative_error(0.0, 0.0, 1e-7), 0.0);
  EXPECT_THROW(parse_gradcheck_kind("everything"), Error);
}

TEST(Adam, FirstStepHasLearningRateMagnitude) {
  Param<double> p("w", {3});
  p.value.data = {1.0, -2.0, 0.5};
  p.grad.data = {0.3, -40.0, 1e-3};
  Adam<double> adam({&p}, AdamConfig{0.01, 0.9, 0.999, 1e-8, 0.0});
  adam.step();
  EXPECT_NEAR(p.value[0], 1.0 - 0.01, 1e-6);
  EXPECT_NEAR(p.value[1], -2.0 + 0.01, 1e-6);
  EXPECT_NEAR(p.value[2], 0.5 - 0.01, 1e-4);
}

TEST(Adam, ClipsGlobalNorm) {
  Param<double> p("w", {2});
  p.grad.data = {30.0, 40.0};
  EXPECT_DOUBLE_EQ(grad_norm<double>({&p}), 50.0);
  Adam<double> adam({&p}, AdamConfig{});
  EXPECT_DOUBLE_EQ(adam.step(), 50.0);
}

TEST(Adam, MinimizesQuadratic) {
  Param<double> p("w", {1});
  p.value[0] = 3.0;
  Adam<double> adam({&p}, AdamConfig{0.05});
  for (int i = 0; i < 2000; ++i) {
    p.grad[0] = 2 * (p.value[0] - 1.0);
    adam.step();
  }
  EXPECT_NEAR(p.value[0], 1.0, 1e-3);
}

TEST(Predictor, StepIsPure) {
  Predictor<float> pred({6, 4, 2});
  pred.init(3);
  const std::vector<float> x = {0.1f, -0.2f, 0.3f, 0.4f, 0.5f, -0.6f};
  auto s1 = pred.zero_state(), s2 = pred.zero_state();
  const auto y1 = pred.step(x, s1);
  const auto y2 = pred.step(x, s2);
  EXPECT_EQ(y1, y2);
  EXPECT_EQ(s1.h, s2.h);
  EXPECT_EQ(s1.c, s2.c);
}

TEST(Predictor, ZeroInputClosedForm) {
  const PredictorConfig cfg{3, 2, 2};
  Predictor<double> pred(cfg);
  pred.init(4);
  std::mt19937_64 rng(1);
  for (Param<double>* p : pred.params()) {
    for (double& v : p->value.data) v = std::uniform_real_distribution<double>(-1, 1)(rng);
  }
  const auto params = pred.params();
  const auto& b = params[2]->value;  // gates i, f, o, g
  const auto& w_out = params[3]->value;
  const auto& b_out = params[4]->value;
  auto sig = [](double z) { return 1 / (1 + std::exp(-z)); };
  std::vector<double> h(2);
  for (std::size_t j = 0; j < 2; ++j) {
    const double c = sig(b[j]) * std::tanh(b[6 + j]);
    h[j] = sig(b[4 + j]) * std::tanh(c);
  }
  auto state = pred.zero_state();
  const auto y = pred.step(std::vector<double>(3, 0.0), state);
  for (std::size_t o = 0; o < 2; ++o) {
    EXPECT_NEAR(y[o], b_out[o] + w_out[o * 2] * h[0] + w_out[o * 2 + 1] * h[1], 1e-12);
  }
}

TEST(Predictor, ReplayMatchesTrainingForward) {
  Predictor<float> pred({5, 8, 3});
  pred.init(2);
  std::mt19937_64 rng(5);
  std::vector<std::vector<float>> xs(40, std::vector<float>(5));
  for (auto& x : xs) {
    for (float& v : x) v = std::uniform_real_distribution<float>(-1, 1)(rng);
  }
  auto s_train = pred.zero_state();
  std::vector<std::vector<float>> window_out;
  for (std::size_t start = 0; start < xs.size(); start += 16) {
    const std::vector<std::vector<float>> w(xs.begin() + start, xs.begin() + std::min(xs.size(), start + 16));
    for (auto& y : pred.forward_window(w, s_train)) window_out.push_back(y);
  }
  auto s = pred.zero_state();
  for (std::size_t t = 0; t < xs.size(); ++t) {
    const auto y = pred.step(xs[t], s);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(y[k], window_out[t][k], 1e-6);
  }
}

TEST(ModelIo, RoundTripIsBitExactAndNamed) {
  testing::TempDir dir;
  Predictor<float> pred({4, 3, 2});
  pred.init(8);
  save_model(dir / "m.skl", {{"kind", "test"}}, pred.params());
  const ModelFile f = load_model(dir / "m.skl");
  EXPECT_EQ(f.meta["kind"], "test");
  Predictor<float> other({4, 3, 2});
  assign_params(f, other.params());
  for (std::size_t k = 0; k < pred.params().size(); ++k) {
    EXPECT_EQ(pred.params()[k]->value.data, other.params()[k]->value.data);
  }
  Predictor<float> wrong({4, 5, 2});
  EXPECT_THROW(assign_params(f, wrong.params()), FormatError);
}

TEST(ModelIo, RejectsCorruptFiles) {
  Predictor<float> pred({4, 3, 2});
  std::stringstream ss;
  write_model(ss, {{"kind", "test"}}, pred.params());
  const std::string bytes = ss.str();
  std::istringstream cut(bytes.substr(0, bytes.size() - 5));
  EXPECT_THROW(read_model(cut, "cut"), FormatError);
  std::string bad = bytes;
  bad[3] = '?';
  std::istringstream in_bad(bad);
  EXPECT_THROW(read_model(in_bad), FormatError);
  std::istringstream trailing(bytes + "!");
  EXPECT_THROW(read_model(trailing), FormatError);
}

TEST(Autoencoder, ShapesAndConfigChecks) {
  Autoencoder<float> ae(AeConfig{});
  ae.init(1);
  const Tensor<float> x({3, 32, 32}, 0.5f);
  EXPECT_EQ(ae.encode(x).shape, (std::vector<int>{32}));
  EXPECT_EQ(ae.reconstruct(x).shape, x.shape);
  EXPECT_EQ(ae.encode_const(x).data, ae.encode(x).data);
  EXPECT_THROW(Autoencoder<float>(AeConfig{3, 30, {8, 16, 32}, 32}), Error);
}

TEST(TrainAutoencoder, ConstantFramesReachNearZeroLoss) {
  const auto eps = synthetic_corpus(4, 30, true);
  AeTrainConfig cfg;
  cfg.epochs = 50;
  cfg.frame_stride = 1;
  cfg.arch = tiny_ae();
  const AeTrainResult r = train_autoencoder(eps, Modality::kRgb, cfg);
  ASSERT_EQ(r.loss_curve.size(), 50u);
  EXPECT_LT(r.loss_curve.back(), 1e-3);
}

TEST(TrainAutoencoder, DeterministicAndDecreasing) {
  const auto eps = synthetic_corpus(4, 30, false);
  AeTrainConfig cfg;
  cfg.epochs = 15;
  cfg.frame_stride = 1;
  cfg.arch = tiny_ae();
  const AeTrainResult a = train_autoencoder(eps, Modality::kDisparity, cfg);
  const AeTrainResult b = train_autoencoder(eps, Modality::kDisparity, cfg);
  EXPECT_EQ(a.loss_curve, b.loss_curve);
  EXPECT_LT(a.loss_curve.back(), 0.5 * a.loss_curve.front());
}

TEST(TrainAutoencoder, Preconditions) {
  AeTrainConfig cfg;
  cfg.arch = tiny_ae();
  EXPECT_THROW(train_autoencoder(synthetic_corpus(2, 30, false), Modality::kRgb, cfg), Error);  // 30 frames
  EXPECT_THROW(train_autoencoder({}, Modality::kRgb, cfg), Error);
  EXPECT_THROW(parse_modality("depth"), Error);
}

TEST(ImageEncoder, SaveLoadPreservesEncoding) {
  testing::TempDir dir;
  const auto eps = synthetic_corpus(4, 30, false);
  AeTrainConfig cfg;
  cfg.epochs = 2;
  cfg.frame_stride = 1;
  cfg.arch = tiny_ae();
  AeTrainResult r = train_autoencoder(eps, Modality::kRgb, cfg);
  r.encoder.save(dir / "rgb.enc");
  const ImageEncoder back = ImageEncoder::load(dir / "rgb.enc");
  const FrameView f = view_of(eps[1].steps[7]);
  EXPECT_EQ(back.encode(f), r.encoder.encode(f));
  EXPECT_EQ(back.modality(), Modality::kRgb);
  EXPECT_THROW(Policy::load(dir / "rgb.enc"), FormatError);
}

TEST(ImageEncoder, PreprocessAveragesStandardizedPixels) {
  const ImageEncoder enc(Modality::kDisparity, AeConfig{1, 32, {8, 16, 32}, 32}, ImageNorm{{1.0}, {2.0}}, 64, 64);
  std::vector<float> disp(64 * 64, 0.0f);
  disp[0] = 5.0f, disp[1] = 1.0f, disp[64] = 3.0f, disp[65] = 7.0f;
  const Tensor<float> x = enc.preprocess({{}, disp});
  EXPECT_EQ(x.shape, (std::vector<int>{1, 32, 32}));
  EXPECT_FLOAT_EQ(x[0], ((5 - 1) + (1 - 1) + (3 - 1) + (7 - 1)) / 2.0f / 4.0f);
  EXPECT_FLOAT_EQ(x[1], -0.5f);
}

struct TrainedEncoders {
  ImageEncoder rgb;
  ImageEncoder disp;
};

TrainedEncoders quick_encoders(const std::vector<dataset::Episode>& eps) {
  AeTrainConfig cfg;
  cfg.epochs = 1;
  cfg.frame_stride = 1;
  cfg.arch = tiny_ae();
  return {train_autoencoder(eps, Modality::kRgb, cfg).encoder, train_autoencoder(eps, Modality::kDisparity, cfg).encoder};
}

TEST(TrainPredictor, ConstantStateLearnsIdentity) {
  const auto eps = synthetic_corpus(4, 30, true);
  TrainedEncoders enc = quick_encoders(eps);
  PredictorTrainConfig cfg;
  cfg.epochs = 1000;
  cfg.hidden = 8;
  const PredictorTrainResult r = train_predictor(eps, enc.rgb, enc.disp, cfg);
  EXPECT_LT(r.loss_curve.back(), 1e-4);
}

TEST(TrainPredictor, DeterministicPerSeedAndReloadable) {
  testing::TempDir dir;
  const auto eps = synthetic_corpus(4, 30, false);
  TrainedEncoders enc = quick_encoders(eps);
  PredictorTrainConfig cfg;
  cfg.epochs = 20;
  cfg.hidden = 8;
  cfg.window = 8;
  PredictorTrainResult a = train_predictor(eps, enc.rgb, enc.disp, cfg);
  const PredictorTrainResult b = train_predictor(eps, enc.rgb, enc.disp, cfg);
  EXPECT_EQ(a.loss_curve, b.loss_curve);
  EXPECT_LT(a.loss_curve.back(), a.loss_curve.front());
  cfg.seed = 2;
  EXPECT_NE(train_predictor(eps, enc.rgb, enc.disp, cfg).loss_curve, a.loss_curve);

  a.policy.save(dir / "p.skl");
  const Policy back = Policy::load(dir / "p.skl");
  EXPECT_EQ(back.stats(), a.policy.stats());
  const FrameView f = view_of(eps[0].steps[3]);
  const auto state = a.policy.stats().normalize_state(dataset::step_state(eps[0].steps[3]));
  auto h1 = a.policy.predictor().zero_state(), h2 = back.predictor().zero_state();
  EXPECT_EQ(a.policy.predict_next(enc.rgb, enc.disp, f, state, h1),
            back.predict_next(enc.rgb, enc.disp, f, state, h2));
  EXPECT_THROW(ImageEncoder::load(dir / "p.skl"), FormatError);
}

TEST(TrainPredictor, SkipsShortEpisodesAndAbortsOnNan) {
  auto eps = synthetic_corpus(3, 20, false);
  eps.push_back(synthetic_episode(9, 1, false));
  TrainedEncoders enc = quick_encoders(synthetic_corpus(4, 30, false));
  PredictorTrainConfig cfg;
  cfg.epochs = 2;
  cfg.hidden = 4;
  EXPECT_NO_THROW(train_predictor(eps, enc.rgb, enc.disp, cfg));

  eps[1].steps[5].state[2] = std::numeric_limits<float>::quiet_NaN();
  try {
    train_predictor(eps, enc.rgb, enc.disp, cfg);
    FAIL() << "NaN state accepted";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch 0"), std::string::npos) << e.what();
  }
}

TEST(TrainPredictor, FinetuneChangesEncoders) {
  const auto eps = synthetic_corpus(3, 20, false);
  TrainedEncoders enc = quick_encoders(synthetic_corpus(4, 30, false));
  const FrameView f = view_of(eps[0].steps[0]);
  const auto before = enc.rgb.encode(f);
  PredictorTrainConfig cfg;
  cfg.epochs = 2;
  cfg.hidden = 4;
  cfg.finetune_encoders = true;
  train_predictor(eps, enc.rgb, enc.disp, cfg);
  EXPECT_NE(enc.rgb.encode(f), before);
}

TEST(Policy, RejectsMismatchedDimensions) {
  const auto eps = synthetic_corpus(2, 5, false);
  const dataset::NormStats stats = dataset::compute_norm_stats(eps);
  EXPECT_THROW(Policy(sim::Variant::kLong, stats, {69, 8, 5}, 32, 32), Error);
  EXPECT_THROW(Policy(sim::Variant::kShort, stats, {69, 8, 7}, 32, 32), Error);
  const Policy p(sim::Variant::kShort, stats, {69, 8, 5}, 32, 32);
  EXPECT_THROW(p.make_input(std::vector<float>(32), std::vector<float>(32), std::vector<double>(7)), Error);
}

TEST(LossCsv, Format) {
  testing::TempDir dir;
  write_loss_csv(dir / "l.csv", std::vector<double>{0.5, 0.25});
  EXPECT_EQ(testing::read_file(dir / "l.csv"), "epoch,loss\n0,0.5\n1,0.25\n");
}

}  // namespace
}  // namespace skl::learner
