// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Binary cloud files: "PCLD0001", u32 count, then count x 6 float32
// (x, y, z, r, g, b), little-endian.

#ifndef SKL_PERCEPTION_CLOUD_IO_HPP_
#define SKL_PERCEPTION_CLOUD_IO_HPP_

#include <filesystem>
#include <iosfwd>

#include "skl/perception/point_cloud.hpp"

namespace skl::perception {

void write_cloud(std::ostream& out, const PointCloud& cloud);
PointCloud read_cloud(std::istream& in, const std::string& name = "<stream>");

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path);
PointCloud load_cloud(const std::filesystem::path& path);

}  // namespace skl::perception

#endif  // SKL_PERCEPTION_CLOUD_IO_HPP_
