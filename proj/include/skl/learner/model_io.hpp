// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Model files:
//   "SKLMODL1", u32 schema version, u32 meta length, meta (JSON text),
//   u32 parameter count, then per parameter:
//   u32 name length, name, u32 rank, rank x u32 dims, f32 data (little-endian)

#ifndef SKL_LEARNER_MODEL_IO_HPP_
#define SKL_LEARNER_MODEL_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "skl/learner/tensor.hpp"

namespace skl::learner {

inline constexpr std::uint32_t kModelSchemaVersion = 1;

struct NamedTensor {
  std::string name;
  std::vector<int> shape;
  std::vector<float> data;
};

struct ModelFile {
  nlohmann::json meta;
  std::vector<NamedTensor> params;
};

void write_model(std::ostream& out, const nlohmann::json& meta, const ParamList<float>& params);
ModelFile read_model(std::istream& in, const std::string& name = "<stream>");

void save_model(const std::filesystem::path& path, const nlohmann::json& meta, const ParamList<float>& params);
ModelFile load_model(const std::filesystem::path& path);

/// Copies stored values into `params` by name; every parameter must be
/// present with a matching shape.
void assign_params(const ModelFile& file, const ParamList<float>& params);

}  // namespace skl::learner

#endif  // SKL_LEARNER_MODEL_IO_HPP_
