// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SKL_SIM_IMAGE_IO_HPP_
#define SKL_SIM_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>

namespace skl::sim {

/// Disparity is stored as round(disparity * kDisparityPgmScale), 16-bit big-endian.
inline constexpr double kDisparityPgmScale = 1000.0;

/// Binary PPM (P6), 8-bit.
void write_ppm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint8_t> rgb);

/// Binary PGM (P5), maxval 65535.
void write_disparity_pgm(const std::filesystem::path& path, int width, int height,
                         std::span<const float> disparity);

}  // namespace skl::sim

#endif  // SKL_SIM_IMAGE_IO_HPP_
