// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// The default scene family used for collection and evaluation.

#ifndef SKL_SIM_SCENARIO_HPP_
#define SKL_SIM_SCENARIO_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "skl/sim/types.hpp"

namespace skl::sim {

/// Long: the robot starts ~3 m from the table and must drive there first.
/// Short: the robot starts in front of the table; only the arm moves.
enum class Variant { kLong, kShort };

std::string_view to_string(Variant v);
/// Throws skl::Error on anything but "long" / "short".
Variant parse_variant(std::string_view s);

/// Seeded scene: one colored box on the table (palette color `seed % 10`).
/// Short scenes place the object on the arm plane; long scenes add obstacles
/// between the start pose and the table.
WorldConfig make_scenario(Variant variant, std::uint64_t seed);

}  // namespace skl::sim

#endif  // SKL_SIM_SCENARIO_HPP_
