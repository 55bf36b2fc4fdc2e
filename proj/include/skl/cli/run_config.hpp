// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Layered run configuration: built-in defaults < config file < flags. Keys are
// dotted ("train.epochs") and every value remembers where it came from.

#ifndef SKL_CLI_RUN_CONFIG_HPP_
#define SKL_CLI_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "skl/expert/expert.hpp"
#include "skl/eval/rollout.hpp"
#include "skl/learner/training.hpp"

namespace skl::cli {

enum class Source { kDefault, kFile, kFlag };

std::string_view to_string(Source s);

class RunConfig {
 public:
  /// All known keys at their default values.
  RunConfig();

  /// Reads `key = value` lines; '#' starts a comment. Unknown keys and
  /// malformed lines are errors naming the file and line.
  void load_file(const std::filesystem::path& path);
  /// Applies one override; `source` is kFlag for command-line values.
  void set(const std::string& key, const std::string& value, Source source);
  /// Parses "key=value".
  void set_assignment(const std::string& assignment, Source source);

  [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) != 0; }
  [[nodiscard]] const std::string& raw(const std::string& key) const;
  [[nodiscard]] Source source(const std::string& key) const;
  [[nodiscard]] double get_double(const std::string& key) const;
  [[nodiscard]] std::int64_t get_int(const std::string& key) const;
  [[nodiscard]] bool get_bool(const std::string& key) const;

  /// Typed views used by the subcommands.
  [[nodiscard]] expert::ExpertOptions expert_options() const;
  [[nodiscard]] learner::AeTrainConfig ae_train_config() const;
  [[nodiscard]] learner::PredictorTrainConfig predictor_train_config() const;
  [[nodiscard]] eval::RolloutOptions rollout_options() const;

  /// {key: {value, source}} for manifests.
  [[nodiscard]] nlohmann::json to_json() const;

 private:
  struct Entry {
    std::string value;
    Source source = Source::kDefault;
    char type = 'd';  // d(ouble) i(nt) b(ool) l(ist of ints)
  };
  void define(const std::string& key, std::string value, char type);
  static void check_type(const std::string& key, const std::string& value, char type);

  std::map<std::string, Entry> entries_;
};

/// 64-bit FNV-1a over a file's bytes, or over every regular file below a
/// directory (relative path and contents, in sorted path order). Hex string.
std::string content_hash(const std::filesystem::path& path);

std::string tool_version();

/// Writes {tool, version, command, args, config, inputs: {path: hash}}.
void write_run_manifest(const std::filesystem::path& path, const std::string& command,
                        const nlohmann::json& args, const RunConfig& config,
                        const std::vector<std::filesystem::path>& inputs);

}  // namespace skl::cli

#endif  // SKL_CLI_RUN_CONFIG_HPP_
