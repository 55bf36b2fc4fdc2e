// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/learner/model_io.hpp"

#include <fstream>
#include <map>

#include "skl/common/binary_io.hpp"

namespace skl::learner {
namespace {
constexpr std::string_view kMagic = "SKLMODL1";
}

void write_model(std::ostream& out, const nlohmann::json& meta, const ParamList<float>& params) {
  io::write_bytes(out, kMagic.data(), kMagic.size());
  io::write_u32(out, kModelSchemaVersion);
  const std::string meta_text = meta.dump();
  io::write_u32(out, static_cast<std::uint32_t>(meta_text.size()));
  io::write_bytes(out, meta_text.data(), meta_text.size());
  io::write_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const Param<float>* p : params) {
    io::write_u32(out, static_cast<std::uint32_t>(p->name.size()));
    io::write_bytes(out, p->name.data(), p->name.size());
    io::write_u32(out, static_cast<std::uint32_t>(p->value.shape.size()));
    for (int d : p->value.shape) io::write_u32(out, static_cast<std::uint32_t>(d));
    io::write_f32_span(out, p->value.span());
  }
}

ModelFile read_model(std::istream& in, const std::string& name) {
  io::Reader r(in, name);
  r.expect_magic(kMagic);
  const std::uint32_t version = r.u32();
  if (version != kModelSchemaVersion) {
    throw FormatError(name + ": unsupported model version " + std::to_string(version));
  }
  ModelFile file;
  std::string meta_text(r.u32(), '\0');
  r.read_bytes(meta_text.data(), meta_text.size());
  try {
    file.meta = nlohmann::json::parse(meta_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(name + ": corrupt metadata: " + e.what());
  }
  const std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor t;
    t.name.resize(r.u32());
    r.read_bytes(t.name.data(), t.name.size());
    const std::uint32_t rank = r.u32();
    if (rank > 8) throw FormatError(name + ": implausible rank for '" + t.name + "' at offset " + std::to_string(r.offset()));
    std::size_t n = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      t.shape.push_back(static_cast<int>(r.u32()));
      n *= static_cast<std::size_t>(t.shape.back());
    }
    if (n > (std::size_t{1} << 28)) throw FormatError(name + ": implausible size for '" + t.name + "'");
    t.data.resize(n);
    r.f32_span(t.data);
    file.params.push_back(std::move(t));
  }
  r.expect_end();
  return file;
}

void save_model(const std::filesystem::path& path, const nlohmann::json& meta, const ParamList<float>& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_model(out, meta, params);
  if (!out) throw Error("write failed: " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": missing or unreadable");
  return read_model(in, path.string());
}

void assign_params(const ModelFile& file, const ParamList<float>& params) {
  std::map<std::string, const NamedTensor*> by_name;
  for (const auto& t : file.params) by_name[t.name] = &t;
  if (by_name.size() != params.size()) throw FormatError("model: parameter count mismatch");
  for (Param<float>* p : params) {
    const auto it = by_name.find(p->name);
    if (it == by_name.end()) throw FormatError("model: missing parameter '" + p->name + "'");
    if (it->second->shape != p->value.shape) throw FormatError("model: shape mismatch for '" + p->name + "'");
    p->value.data = it->second->data;
  }
}

}  // namespace skl::learner
