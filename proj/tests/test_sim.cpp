// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>

#include "skl/common/error.hpp"
#include "skl/sim/arm.hpp"
#include "skl/sim/image_io.hpp"
#include "skl/sim/scenario.hpp"
#include "skl/sim/scene_io.hpp"
#include "skl/sim/world.hpp"
#include "test_util.hpp"

namespace skl::sim {
namespace {

WorldConfig empty_scene() {
  WorldConfig c;
  c.objects.push_back({"obj0", Vec3(1.2, 0.0, 0.44), Vec3(0.04, 0.04, 0.04), object_palette()[0]});
  c.target_id = "obj0";
  c.start_base = {0.6, 0.0, 0.0};
  return c;
}

TEST(Types, WrapAngle) {
  EXPECT_DOUBLE_EQ(wrap_angle(0.0), 0.0);
  EXPECT_NEAR(wrap_angle(3 * std::numbers::pi), std::numbers::pi, 1e-12);
  EXPECT_NEAR(wrap_angle(-std::numbers::pi), std::numbers::pi, 1e-12);
  EXPECT_NEAR(wrap_angle(2 * std::numbers::pi + 0.3), 0.3, 1e-12);
}

TEST(Types, ClampJointsAndCommands) {
  const JointVector q = clamp_joints({1.0, -3.0, 3.0, 0.5, -1.0});
  EXPECT_EQ(q, (JointVector{0.35, -2.0, 2.0, 0.5, 0.0}));
  const BaseCommand c = BaseCommand{2.0, -5.0}.clamped();
  EXPECT_EQ(c.v, kMaxLinearSpeed);
  EXPECT_EQ(c.omega, -kMaxAngularSpeed);
  EXPECT_TRUE(within_limits(q));
  EXPECT_FALSE(within_limits({0.4, 0, 0, 0, 0}));
}

TEST(Types, BoxContainment) {
  const Box b{Vec3::Zero(), Vec3(1, 1, 1)};
  EXPECT_TRUE(b.contains(Vec3(1, 1, 1)));
  EXPECT_FALSE(b.strictly_contains(Vec3(1, 0, 0)));
  EXPECT_TRUE(b.strictly_contains(Vec3(0.99, 0, 0)));
  EXPECT_FALSE(b.contains(Vec3(1.01, 0, 0)));
  EXPECT_TRUE(b.contains(Vec3(1.01, 0, 0), 0.02));
}

TEST(Types, PaletteColorsAreDistinct) {
  const auto& p = object_palette();
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_GT((p[i] - kFloorColor).norm(), 0.25) << i;
    EXPECT_GT((p[i] - kTableColor).norm(), 0.25) << i;
    EXPECT_GT((p[i] - kObstacleColor).norm(), 0.25) << i;
    for (std::size_t j = i + 1; j < p.size(); ++j) EXPECT_GT((p[i] - p[j]).norm(), 0.25) << i << "," << j;
  }
}

TEST(Config, ValidateRejectsBadScenes) {
  WorldConfig c = empty_scene();
  c.target_id = "missing";
  EXPECT_THROW(c.validate(), Error);
  c = empty_scene();
  c.dt = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = empty_scene();
  c.objects.push_back(c.objects.front());
  EXPECT_THROW(c.validate(), Error);
}

// 4x4 homogeneous-transform chain, independent of the planar closed form.
Vec3 fk_homogeneous(const JointVector& q, const BasePose& base) {
  using Eigen::Affine3d;
  using Eigen::AngleAxisd;
  using Eigen::Translation3d;
  const Eigen::Vector3d y_axis = Eigen::Vector3d::UnitY();
  Affine3d t = Translation3d(base.x, base.y, 0.0) * AngleAxisd(base.yaw, Eigen::Vector3d::UnitZ());
  t = t * Translation3d(ArmGeometry::kShoulderForward, 0.0, ArmGeometry::kShoulderHeight + q[kTorso]);
  // Positive pitch raises the link: rotation about -y.
  t = t * AngleAxisd(-q[kQ1], y_axis) * Translation3d(ArmGeometry::kLink1, 0, 0);
  t = t * AngleAxisd(-q[kQ2], y_axis) * Translation3d(ArmGeometry::kLink2, 0, 0);
  t = t * AngleAxisd(-q[kQ3], y_axis) * Translation3d(ArmGeometry::kTipLink, 0, 0);
  return t.translation();
}

TEST(Arm, MatchesHomogeneousTransformChain) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    JointVector q{};
    for (std::size_t j = 0; j < kNumJoints; ++j) q[j] = kJointMin[j] + (u(rng) + 1) / 2 * (kJointMax[j] - kJointMin[j]);
    const BasePose base{u(rng) * 3, u(rng) * 3, u(rng) * 3};
    EXPECT_LT((tip_position(q, base) - fk_homogeneous(q, base)).norm(), 1e-12);
  }
}

TEST(Arm, StraightArmReach) {
  const Vec3 tip = tip_position({0.0, 0.0, 0.0, 0.0, 1.0}, {});
  EXPECT_NEAR(tip.x(), ArmGeometry::kShoulderForward + ArmGeometry::kReach, 1e-12);
  EXPECT_NEAR(tip.z(), ArmGeometry::kShoulderHeight, 1e-12);
}

TEST(World, UnicycleKinematics) {
  WorldConfig c = empty_scene();
  c.start_base = {-2.0, 0.0, 0.3};
  World w(c);
  const JointVector q = c.start_joints;
  w.step({0.4, 0.5}, q);
  EXPECT_NEAR(w.state().base.x, -2.0 + 0.4 * std::cos(0.3) * 0.1, 1e-12);
  EXPECT_NEAR(w.state().base.y, 0.4 * std::sin(0.3) * 0.1, 1e-12);
  EXPECT_NEAR(w.state().base.yaw, 0.35, 1e-12);
  EXPECT_EQ(w.tick(), 1u);
}

TEST(World, JointRateLimits) {
  World w(empty_scene());
  const JointVector start = w.state().joints;
  w.step({}, {0.35, 2.0, 2.0, 2.0, 0.0});
  // No joint reaches its limit in one tick, so each moves by exactly rate * dt.
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    EXPECT_NEAR(std::abs(w.state().joints[j] - start[j]), kJointRate[j] * 0.1, 1e-12) << j;
  }
  for (int i = 0; i < 100; ++i) w.step({}, {1.0, 9.0, 9.0, 9.0, -1.0});
  EXPECT_EQ(w.state().joints, (JointVector{0.35, 2.0, 2.0, 2.0, 0.0}));
}

TEST(World, BaseBlockedByTable) {
  WorldConfig c = empty_scene();
  c.start_base = {0.8, 0.0, 0.0};  // table front face at x = 1.10
  World w(c);
  for (int i = 0; i < 50; ++i) w.step({0.5, 0.0}, c.start_joints);
  EXPECT_LT(w.state().base.x, 1.10 - kBaseRadius + 1e-9);
  EXPECT_GT(w.state().base.x, 1.10 - kBaseRadius - 0.05 - 1e-9);
}

TEST(World, TouchAndAttach) {
  WorldConfig c = empty_scene();
  World w(c);
  EXPECT_FALSE(w.touching());
  EXPECT_FALSE(w.attach_if_grasping());
  // Move the object onto the tip.
  c.objects[0].center = tip_position(c.start_joints, c.start_base) + Vec3(0.05, 0, 0);
  World w2(c);
  EXPECT_TRUE(w2.touching());  // 0.05 = half extent 0.04 + 0.01 < 0.02 inflation
  EXPECT_FALSE(w2.attach_if_grasping()) << "gripper open";
  for (int i = 0; i < 10 && w2.state().joints[kGripper] >= kGraspAperture; ++i) {
    JointVector q = w2.state().joints;
    q[kGripper] = 0.0;
    w2.step({}, q);
  }
  EXPECT_TRUE(w2.attach_if_grasping());
  JointVector up = w2.state().joints;
  up[kTorso] = 0.35;
  const Vec3 before = w2.target().center;
  for (int i = 0; i < 5; ++i) w2.step({}, up);
  EXPECT_GT(w2.target().center.z(), before.z() + 0.04);
}

// Projects a world point with an independently built pinhole model.
bool project(const CameraIntrinsics& cam, const BasePose& base, const Vec3& p, double& u, double& v, double& depth) {
  const Eigen::Matrix3d r = (Eigen::AngleAxisd(base.yaw, Eigen::Vector3d::UnitZ()) *
                             Eigen::AngleAxisd(cam.mount_pitch, Eigen::Vector3d::UnitY()))
                                .toRotationMatrix();
  // Columns: optical axis (x), left (y), up (z) in the world frame.
  const Vec3 local = r.transpose() * (p - Vec3(base.x, base.y, cam.mount_height));
  depth = local.x();
  if (depth <= 0) return false;
  u = cam.focal_px * (-local.y()) / depth + cam.width / 2.0;
  v = cam.focal_px * (-local.z()) / depth + cam.height / 2.0;
  return true;
}

TEST(Render, CubeProjectionMatchesPinholeModel) {
  WorldConfig c = empty_scene();
  c.camera.depth_noise_sigma = 0.0;
  const World w(c);
  const SensorFrame f = w.render();
  const Box box = c.objects[0].box();

  double umin = 1e9, umax = -1e9, vmin = 1e9, vmax = -1e9;
  for (int k = 0; k < 8; ++k) {
    const Vec3 corner(k & 1 ? box.max().x() : box.min().x(), k & 2 ? box.max().y() : box.min().y(),
                      k & 4 ? box.max().z() : box.min().z());
    double u, v, d;
    ASSERT_TRUE(project(c.camera, c.start_base, corner, u, v, d));
    umin = std::min(umin, u), umax = std::max(umax, u), vmin = std::min(vmin, v), vmax = std::max(vmax, v);
  }
  int object_pixels = 0;
  for (int v = 0; v < f.height; ++v) {
    for (int u = 0; u < f.width; ++u) {
      if (f.hit[static_cast<std::size_t>(v * f.width + u)] != 0) continue;
      ++object_pixels;
      EXPECT_GE(u + 0.5, umin);
      EXPECT_LE(u + 0.5, umax);
      EXPECT_GE(v + 0.5, vmin);
      EXPECT_LE(v + 0.5, vmax);
    }
  }
  EXPECT_GT(object_pixels, 4);

  // Depth at the pixel containing the top-face center equals the analytic
  // ray/plane intersection of that pixel's ray.
  double u, v, d;
  ASSERT_TRUE(project(c.camera, c.start_base, Vec3(box.center.x(), box.center.y(), box.max().z()), u, v, d));
  const int pu = static_cast<int>(u), pv = static_cast<int>(v);
  const std::size_t idx = static_cast<std::size_t>(pv * f.width + pu);
  ASSERT_EQ(f.hit[idx], 0);
  const CameraPose pose = camera_pose(c.camera, c.start_base);
  const Vec3 dir = pose.forward + (pu + 0.5 - 32) / 60.0 * pose.right + (pv + 0.5 - 32) / 60.0 * pose.down;
  const double t = (box.max().z() - pose.origin.z()) / dir.z();
  EXPECT_NEAR(f.depth[idx], t, 1e-6);
  EXPECT_NEAR(f.disparity[idx], 60.0 * 0.08 / f.depth[idx], 1e-5);
  EXPECT_EQ(f.rgb[idx * 3], 230);  // red 0.9 -> 230
}

TEST(Render, FloorDepthAndDisparity) {
  WorldConfig c = empty_scene();
  c.camera.depth_noise_sigma = 0.0;
  c.start_base = {-5.0, 0.0, std::numbers::pi};  // looking away from the table
  const SensorFrame f = World(c).render();
  const std::size_t idx = 63 * 64 + 32;
  ASSERT_EQ(f.hit[idx], SensorFrame::kHitFloor);
  // Bottom-row ray hits the floor: depth = h / (sin(pitch) + yc cos(pitch)).
  const double yc = (63.5 - 32) / 60.0;
  const double expected = 1.1 / (std::sin(0.6) + yc * std::cos(0.6));
  EXPECT_NEAR(f.depth[idx], expected, 1e-5);
  // Top rows see above the horizon only when pitched up; with 0.6 rad pitch
  // the top row still hits the distant floor.
  EXPECT_EQ(f.cloud.size(), f.cloud_pixel.size());
  for (std::size_t i = 0; i < f.cloud.size(); ++i) EXPECT_NEAR(f.cloud.points[i].position.z(), 0.0, 1e-4);
}

TEST(Render, NoiseIsSeededByTick) {
  const WorldConfig c = empty_scene();
  World w(c);
  const SensorFrame a = w.render();
  const SensorFrame b = w.render();
  EXPECT_EQ(a.depth, b.depth);
  EXPECT_EQ(a.rgb, b.rgb);
  w.step({}, c.start_joints);
  const SensorFrame d = w.render();
  EXPECT_NE(a.depth, d.depth);
  EXPECT_EQ(a.rgb, d.rgb);

  WorldConfig c2 = c;
  c2.rng_seed = 99;
  EXPECT_NE(World(c2).render().depth, a.depth);
}

TEST(Render, NoiseStatistics) {
  WorldConfig c = empty_scene();
  c.start_base = {-5.0, 0.0, std::numbers::pi};
  WorldConfig clean = c;
  clean.camera.depth_noise_sigma = 0.0;
  const SensorFrame noisy = World(c).render();
  const SensorFrame exact = World(clean).render();
  double sum = 0, sq = 0;
  for (std::size_t i = 0; i < noisy.depth.size(); ++i) {
    const double e = noisy.depth[i] - exact.depth[i];
    sum += e, sq += e * e;
  }
  const double n = static_cast<double>(noisy.depth.size());
  EXPECT_NEAR(sum / n, 0.0, 0.0003);
  EXPECT_NEAR(std::sqrt(sq / n), 0.002, 0.0003);
}

TEST(Scenario, DeterministicAndValid) {
  for (Variant v : {Variant::kShort, Variant::kLong}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const WorldConfig a = make_scenario(v, seed);
      EXPECT_NO_THROW(a.validate());
      EXPECT_EQ(scene_to_json(a), scene_to_json(make_scenario(v, seed)));
      EXPECT_EQ(a.objects.front().color, object_palette()[seed % 10]);
      const World w(a);
      EXPECT_FALSE(w.base_collides(a.start_base));
    }
  }
  EXPECT_NE(scene_to_json(make_scenario(Variant::kShort, 1)), scene_to_json(make_scenario(Variant::kShort, 2)));
  EXPECT_THROW(parse_variant("medium"), Error);
  EXPECT_EQ(parse_variant("long"), Variant::kLong);
}

TEST(SceneIo, RoundTrip) {
  testing::TempDir dir;
  const WorldConfig a = make_scenario(Variant::kLong, 3);
  save_scene(a, dir / "scene.json");
  const WorldConfig b = load_scene(dir / "scene.json");
  EXPECT_EQ(scene_to_json(a).dump(), scene_to_json(b).dump());
  EXPECT_EQ(World(a).render().depth, World(b).render().depth);
}

TEST(SceneIo, RejectsUnknownKeys) {
  nlohmann::json j = scene_to_json(make_scenario(Variant::kShort, 0));
  j["bogus"] = 1;
  EXPECT_THROW(scene_from_json(j), Error);
}

TEST(ImageIo, PpmAndPgmHeaders) {
  testing::TempDir dir;
  const std::vector<std::uint8_t> rgb = {1, 2, 3, 4, 5, 6};
  write_ppm(dir / "a.ppm", 2, 1, rgb);
  EXPECT_EQ(testing::read_file(dir / "a.ppm"), std::string("P6\n2 1\n255\n\x01\x02\x03\x04\x05\x06", 17));
  const std::vector<float> disp = {1.5f, 0.0f};
  write_disparity_pgm(dir / "d.pgm", 2, 1, disp);
  const std::string pgm = testing::read_file(dir / "d.pgm");
  ASSERT_EQ(pgm.substr(0, 13), "P5\n2 1\n65535\n");
  ASSERT_EQ(pgm.size(), 17u);
  // 1.5 * 1000 = 1500 = 0x05DC, big-endian.
  EXPECT_EQ(static_cast<unsigned char>(pgm[13]), 0x05);
  EXPECT_EQ(static_cast<unsigned char>(pgm[14]), 0xDC);
  EXPECT_THROW(write_ppm(dir / "b.ppm", 3, 1, rgb), Error);
}

}  // namespace
}  // namespace skl::sim
