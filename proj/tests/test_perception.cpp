// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "skl/common/error.hpp"
#include "skl/perception/cloud_io.hpp"
#include "skl/perception/filters.hpp"
#include "skl/sim/scenario.hpp"
#include "skl/sim/world.hpp"
#include "test_util.hpp"

namespace skl::perception {
namespace {

TEST(VoxelGrid, MatchesBucketingOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PointCloud cloud = oracle::random_cloud(seed, 300, 0.1);
    const PointCloud got = voxel_grid_filter(cloud, 0.02);
    const PointCloud want = oracle::voxel_grid(cloud, 0.02);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_LT((got.points[i].position - want.points[i].position).norm(), 1e-12);
      EXPECT_LT((got.points[i].color - want.points[i].color).norm(), 1e-12);
    }
  }
}

TEST(VoxelGrid, SinglePointAndNegativeCoordinates) {
  PointCloud c;
  c.push_back(Vec3(-0.005, 0.004, 0.0), Rgb(1, 0, 0));
  c.push_back(Vec3(0.005, 0.004, 0.0), Rgb(0, 1, 0));
  const PointCloud out = voxel_grid_filter(c, 0.01);
  ASSERT_EQ(out.size(), 2u);  // floor(-0.5) = -1 and floor(0.5) = 0 differ
  EXPECT_EQ(out.points[0].color, Rgb(1, 0, 0));
  EXPECT_TRUE(voxel_grid_filter(PointCloud{}, 0.01).empty());
  EXPECT_THROW(voxel_grid_filter(c, 0.0), Error);
}

TEST(VoxelGrid, CoincidentPointsMerge) {
  PointCloud c;
  for (int i = 0; i < 5; ++i) c.push_back(Vec3(0.001, 0.001, 0.001), Rgb(0.2 * i, 0, 0));
  const PointCloud out = voxel_grid_filter(c, 0.01);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out.points[0].color.x(), 0.4, 1e-12);
}

TEST(Sor, MatchesQuadraticOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PointCloud cloud = oracle::random_cloud(seed + 100, 50 + 20 * seed, 1.0, 0.1);
    for (double alpha : {0.0, 1.0, 2.0}) {
      const PointCloud got = statistical_outlier_removal(cloud, 8, alpha);
      EXPECT_TRUE(got == oracle::sor(cloud, 8, alpha)) << "seed " << seed << " alpha " << alpha;
    }
  }
}

TEST(Sor, RemovesIsolatedOutlier) {
  PointCloud c;
  for (int x = 0; x < 5; ++x) {
    for (int y = 0; y < 5; ++y) c.push_back(Vec3(0.01 * x, 0.01 * y, 0), Rgb::Zero());
  }
  c.push_back(Vec3(1, 1, 1), Rgb::Ones());
  const PointCloud out = statistical_outlier_removal(c, 4, 1.0);
  EXPECT_EQ(out.size(), 25u);
  for (const auto& p : out.points) EXPECT_LT(p.position.norm(), 0.1);
}

TEST(Sor, TiesAndInsufficientPoints) {
  PointCloud c;
  for (int i = 0; i < 4; ++i) c.push_back(Vec3(i, 0, 0), Rgb::Zero());
  EXPECT_THROW(statistical_outlier_removal(c, 4, 1.0), PerceptionError);
  // Cube corners: every point's three nearest neighbours sit at exactly 1.
  PointCloud cube;
  for (int i = 0; i < 8; ++i) cube.push_back(Vec3(i & 1, (i >> 1) & 1, (i >> 2) & 1), Rgb::Zero());
  EXPECT_EQ(statistical_outlier_removal(cube, 3, 0.0).size(), 8u);
}

TEST(Segmentation, PaletteColorsSeparate) {
  const auto& palette = sim::object_palette();
  PointCloud c;
  for (std::size_t i = 0; i < palette.size(); ++i) c.push_back(Vec3(static_cast<double>(i), 0, 0), palette[i]);
  c.push_back(Vec3(-1, 0, 0), sim::kTableColor);
  c.push_back(Vec3(-2, 0, 0), sim::kFloorColor);
  for (std::size_t i = 0; i < palette.size(); ++i) {
    const PointCloud seg = color_segment(c, palette[i], 0.25);
    ASSERT_EQ(seg.size(), 1u) << i;
    EXPECT_EQ(seg.points[0].position.x(), static_cast<double>(i));
  }
}

TEST(Segmentation, ThresholdIsInclusive) {
  PointCloud c;
  c.push_back(Vec3::Zero(), Rgb(0.5, 0, 0));
  EXPECT_EQ(color_segment(c, Rgb(0.25, 0, 0), 0.25).size(), 1u);
  EXPECT_EQ(color_segment(c, Rgb(0.24, 0, 0), 0.25).size(), 0u);
}

TEST(Centroid, MeanAndEmpty) {
  PointCloud c;
  c.push_back(Vec3(0, 0, 0), Rgb::Zero());
  c.push_back(Vec3(2, 4, 6), Rgb::Zero());
  EXPECT_EQ(centroid(c), Vec3(1, 2, 3));
  EXPECT_THROW(centroid(PointCloud{}), PerceptionError);
}

using oracle::visible_centroid;

TEST(Locate, NoiselessScenesWithinTwoLeaves) {
  const PerceptionParams params;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    sim::WorldConfig scene = sim::make_scenario(sim::Variant::kShort, seed);
    scene.camera.depth_noise_sigma = 0.0;
    const sim::World world(scene);
    const Vec3 p = locate_object(world.render(), world.target().color, params);
    EXPECT_LT((p - visible_centroid(scene)).norm(), 2 * params.leaf) << seed;
  }
}

TEST(Locate, RedCubeAhead) {
  sim::WorldConfig scene = sim::make_scenario(sim::Variant::kShort, 0);
  scene.camera.depth_noise_sigma = 0.0;
  scene.objects[0].center = Vec3(1.2, 0.0, 0.45);
  scene.objects[0].color = sim::object_palette()[0];
  scene.target_id = scene.objects[0].id;
  const sim::World world(scene);
  const Vec3 p = locate_object(world.render(), world.target().color, PerceptionParams{});
  EXPECT_LT((p - visible_centroid(scene)).norm(), 0.03);
}

TEST(Locate, NoisyScenesMeanError) {
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const sim::WorldConfig scene = sim::make_scenario(sim::Variant::kShort, seed);
    const sim::World world(scene);
    const Vec3 p = locate_object(world.render(), world.target().color, PerceptionParams{});
    total += (p - visible_centroid(scene)).norm();
  }
  EXPECT_LT(total / 20, 0.03);
}

TEST(Locate, MissingObjectReportsNotFound) {
  sim::WorldConfig scene = sim::make_scenario(sim::Variant::kShort, 0);
  scene.objects[0].center.y() = 5.0;  // out of view
  const sim::World world(scene);
  EXPECT_THROW(locate_object(world.render(), world.target().color, PerceptionParams{}), PerceptionError);
}

TEST(Params, Validation) {
  PerceptionParams p;
  EXPECT_NO_THROW(p.validate());
  p.leaf = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.color_threshold = 2.0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(CloudIo, RoundTripIsBitExact) {
  testing::TempDir dir;
  const PointCloud c = oracle::random_cloud(3, 257, 2.0);
  save_cloud(c, dir / "c.pcld");
  EXPECT_TRUE(load_cloud(dir / "c.pcld") == c);
  save_cloud(PointCloud{}, dir / "e.pcld");
  EXPECT_TRUE(load_cloud(dir / "e.pcld").empty());
}

TEST(CloudIo, TruncationAndCorruption) {
  std::stringstream ss;
  const PointCloud c = oracle::random_cloud(4, 10, 1.0);
  write_cloud(ss, c);
  const std::string bytes = ss.str();
  for (std::size_t cut : {std::size_t{3}, std::size_t{10}, bytes.size() - 1}) {
    std::istringstream in(bytes.substr(0, cut));
    try {
      read_cloud(in, "cut");
      FAIL() << "accepted truncated file at " << cut;
    } catch (const FormatError& e) {
      EXPECT_NE(std::string(e.what()).find("cut"), std::string::npos);
    }
  }
  std::string bad = bytes;
  bad[0] = 'X';
  std::istringstream in_bad(bad);
  EXPECT_THROW(read_cloud(in_bad), FormatError);
  std::istringstream in_long(bytes + "x");
  EXPECT_THROW(read_cloud(in_long), FormatError);

  PointCloud nan_cloud;
  nan_cloud.push_back(Vec3(std::numeric_limits<double>::quiet_NaN(), 0, 0), Rgb::Zero());
  std::stringstream nan_ss;
  write_cloud(nan_ss, nan_cloud);
  EXPECT_THROW(read_cloud(nan_ss), FormatError);
}

}  // namespace
}  // namespace skl::perception
