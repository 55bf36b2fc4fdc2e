// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/perception/cloud_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "skl/common/binary_io.hpp"

namespace skl::perception {

namespace {
constexpr std::string_view kMagic = "PCLD0001";
}

void write_cloud(std::ostream& out, const PointCloud& cloud) {
  io::write_bytes(out, kMagic.data(), kMagic.size());
  io::write_u32(out, static_cast<std::uint32_t>(cloud.size()));
  for (const auto& pt : cloud.points) {
    const std::array<float, 6> row = {
        static_cast<float>(pt.position.x()), static_cast<float>(pt.position.y()),
        static_cast<float>(pt.position.z()), static_cast<float>(pt.color.x()),
        static_cast<float>(pt.color.y()),    static_cast<float>(pt.color.z())};
    io::write_f32_span(out, row);
  }
}

PointCloud read_cloud(std::istream& in, const std::string& name) {
  io::Reader reader(in, name);
  reader.expect_magic(kMagic);
  const std::uint32_t count = reader.u32();
  PointCloud cloud;
  cloud.points.reserve(std::min<std::uint32_t>(count, 1u << 20));
  std::array<float, 6> row{};
  for (std::uint32_t i = 0; i < count; ++i) {
    reader.f32_span(row);
    for (float v : row) {
      if (!std::isfinite(v)) {
        throw FormatError(name + ": non-finite value in point " + std::to_string(i) + " (offset " +
                          std::to_string(reader.offset()) + ")");
      }
    }
    cloud.push_back(Vec3(row[0], row[1], row[2]), Rgb(row[3], row[4], row[5]));
  }
  reader.expect_end();
  return cloud;
}

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_cloud(out, cloud);
}

PointCloud load_cloud(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return read_cloud(in, path.string());
}

}  // namespace skl::perception
