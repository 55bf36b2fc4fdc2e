// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/sim/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "skl/common/error.hpp"

namespace skl::sim {

void write_ppm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint8_t> rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3) throw Error("write_ppm: size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "P6\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
}

void write_disparity_pgm(const std::filesystem::path& path, int width, int height,
                         std::span<const float> disparity) {
  if (disparity.size() != static_cast<std::size_t>(width) * height) {
    throw Error("write_disparity_pgm: size mismatch");
  }
  std::vector<std::uint8_t> bytes;
  bytes.reserve(disparity.size() * 2);
  for (float d : disparity) {
    const double scaled = std::clamp(std::round(d * kDisparityPgmScale), 0.0, 65535.0);
    const auto v = static_cast<std::uint16_t>(scaled);
    bytes.push_back(static_cast<std::uint8_t>(v >> 8));
    bytes.push_back(static_cast<std::uint8_t>(v & 0xFF));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "P5\n" << width << ' ' << height << "\n65535\n";
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace skl::sim
