// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/cli/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "skl/common/error.hpp"

#ifndef SKL_VERSION
#define SKL_VERSION "0.0.0"
#endif

namespace skl::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    int v = 0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || p != item.data() + item.size()) throw Error("bad integer '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error("empty list");
  return out;
}

}  // namespace

std::string_view to_string(Source s) {
  switch (s) {
    case Source::kDefault: return "default";
    case Source::kFile: return "file";
    case Source::kFlag: return "flag";
  }
  return "?";
}

RunConfig::RunConfig() {
  const expert::ExpertOptions ex;
  define("perception.leaf", fmt(ex.perception.leaf), 'd');
  define("perception.k_neighbors", std::to_string(ex.perception.k_neighbors), 'i');
  define("perception.alpha", fmt(ex.perception.alpha), 'd');
  define("perception.color_threshold", fmt(ex.perception.color_threshold), 'd');
  define("expert.standoff", fmt(ex.standoff), 'd');
  define("expert.pregrasp_height", fmt(ex.pregrasp_height), 'd');
  define("expert.lift_height", fmt(ex.lift_height), 'd');
  define("expert.marker_noise", fmt(ex.marker_noise), 'd');
  define("expert.approach_jitter_range", fmt(ex.approach_jitter_range), 'd');
  define("expert.max_navigation_ticks", std::to_string(ex.max_navigation_ticks), 'i');

  const learner::AeTrainConfig ae;
  define("autoencoder.epochs", std::to_string(ae.epochs), 'i');
  define("autoencoder.batch", std::to_string(ae.batch), 'i');
  define("autoencoder.frame_stride", std::to_string(ae.frame_stride), 'i');
  define("autoencoder.seed", std::to_string(ae.seed), 'i');
  define("autoencoder.lr", fmt(ae.adam.lr), 'd');
  define("autoencoder.clip_norm", fmt(ae.adam.clip_norm), 'd');
  define("autoencoder.input_size", std::to_string(ae.arch.size), 'i');
  std::string widths;
  for (int w : ae.arch.widths) widths += (widths.empty() ? "" : ",") + std::to_string(w);
  define("autoencoder.widths", widths, 'l');
  define("autoencoder.latent", std::to_string(ae.arch.latent), 'i');

  const learner::PredictorTrainConfig pr;
  define("train.epochs", std::to_string(pr.epochs), 'i');
  define("train.window", std::to_string(pr.window), 'i');
  define("train.hidden", std::to_string(pr.hidden), 'i');
  define("train.seed", std::to_string(pr.seed), 'i');
  define("train.lr", fmt(pr.adam.lr), 'd');
  define("train.clip_norm", fmt(pr.adam.clip_norm), 'd');
  define("train.finetune_encoders", pr.finetune_encoders ? "true" : "false", 'b');

  const eval::RolloutOptions ro;
  define("eval.max_steps", std::to_string(ro.max_steps), 'i');
}

void RunConfig::define(const std::string& key, std::string value, char type) {
  entries_[key] = Entry{std::move(value), Source::kDefault, type};
}

void RunConfig::check_type(const std::string& key, const std::string& value, char type) {
  try {
    std::size_t used = 0;
    switch (type) {
      case 'd': std::stod(value, &used); break;
      case 'i': std::stoll(value, &used); break;
      case 'b':
        if (value != "true" && value != "false") throw Error("expected true|false");
        used = value.size();
        break;
      case 'l': parse_int_list(value); used = value.size(); break;
      default: break;
    }
    if (used != value.size()) throw Error("trailing characters");
  } catch (const std::exception& e) {
    throw Error("config key '" + key + "': invalid value '" + value + "' (" + e.what() + ")");
  }
}

void RunConfig::set(const std::string& key, const std::string& value, Source source) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error("unknown config key '" + key + "'");
  const std::string v = trim(value);
  check_type(key, v, it->second.type);
  it->second.value = v;
  it->second.source = source;
}

void RunConfig::set_assignment(const std::string& assignment, Source source) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1), source);
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(path.string() + ": cannot read config file");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    try {
      set_assignment(line, Source::kFile);
    } catch (const Error& e) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

const std::string& RunConfig::raw(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error("unknown config key '" + key + "'");
  return it->second.value;
}

Source RunConfig::source(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error("unknown config key '" + key + "'");
  return it->second.source;
}

double RunConfig::get_double(const std::string& key) const { return std::stod(raw(key)); }
std::int64_t RunConfig::get_int(const std::string& key) const { return std::stoll(raw(key)); }
bool RunConfig::get_bool(const std::string& key) const { return raw(key) == "true"; }

expert::ExpertOptions RunConfig::expert_options() const {
  expert::ExpertOptions o;
  o.perception.leaf = get_double("perception.leaf");
  o.perception.k_neighbors = static_cast<std::size_t>(get_int("perception.k_neighbors"));
  o.perception.alpha = get_double("perception.alpha");
  o.perception.color_threshold = get_double("perception.color_threshold");
  o.perception.validate();
  o.standoff = get_double("expert.standoff");
  o.pregrasp_height = get_double("expert.pregrasp_height");
  o.lift_height = get_double("expert.lift_height");
  o.marker_noise = get_double("expert.marker_noise");
  o.approach_jitter_range = get_double("expert.approach_jitter_range");
  o.max_navigation_ticks = static_cast<int>(get_int("expert.max_navigation_ticks"));
  return o;
}

learner::AeTrainConfig RunConfig::ae_train_config() const {
  learner::AeTrainConfig c;
  c.epochs = static_cast<int>(get_int("autoencoder.epochs"));
  c.batch = static_cast<int>(get_int("autoencoder.batch"));
  c.frame_stride = static_cast<int>(get_int("autoencoder.frame_stride"));
  c.seed = static_cast<std::uint64_t>(get_int("autoencoder.seed"));
  c.adam.lr = get_double("autoencoder.lr");
  c.adam.clip_norm = get_double("autoencoder.clip_norm");
  c.arch.size = static_cast<int>(get_int("autoencoder.input_size"));
  c.arch.widths = parse_int_list(raw("autoencoder.widths"));
  c.arch.latent = static_cast<int>(get_int("autoencoder.latent"));
  c.arch.validate();
  if (c.epochs < 0 || c.batch <= 0 || c.frame_stride <= 0 || c.adam.lr <= 0) {
    throw Error("autoencoder settings must be positive");
  }
  return c;
}

learner::PredictorTrainConfig RunConfig::predictor_train_config() const {
  learner::PredictorTrainConfig c;
  c.epochs = static_cast<int>(get_int("train.epochs"));
  c.window = static_cast<int>(get_int("train.window"));
  c.hidden = static_cast<int>(get_int("train.hidden"));
  c.seed = static_cast<std::uint64_t>(get_int("train.seed"));
  c.adam.lr = get_double("train.lr");
  c.adam.clip_norm = get_double("train.clip_norm");
  c.finetune_encoders = get_bool("train.finetune_encoders");
  if (c.epochs < 0 || c.window <= 0 || c.hidden <= 0 || c.adam.lr <= 0) throw Error("train settings must be positive");
  return c;
}

eval::RolloutOptions RunConfig::rollout_options() const {
  eval::RolloutOptions o;
  o.max_steps = static_cast<int>(get_int("eval.max_steps"));
  if (o.max_steps <= 0) throw Error("eval.max_steps must be positive");
  return o;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, e] : entries_) j[key] = {{"value", e.value}, {"source", std::string(cli::to_string(e.source))}};
  return j;
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

void fnv_bytes(std::uint64_t& h, const char* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= kFnvPrime;
  }
}

void fnv_file(std::uint64_t& h, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path.string() + ": cannot read input");
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    fnv_bytes(h, buf, static_cast<std::size_t>(in.gcount()));
  }
}

}  // namespace

std::string content_hash(const std::filesystem::path& path) {
  std::uint64_t h = kFnvOffset;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const std::string rel = std::filesystem::relative(f, path).generic_string();
      fnv_bytes(h, rel.data(), rel.size() + 1);
      fnv_file(h, f);
    }
  } else {
    fnv_file(h, path);
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::string tool_version() { return SKL_VERSION; }

void write_run_manifest(const std::filesystem::path& path, const std::string& command, const nlohmann::json& args,
                        const RunConfig& config, const std::vector<std::filesystem::path>& inputs) {
  nlohmann::json hashes = nlohmann::json::object();
  for (const auto& in : inputs) hashes[in.generic_string()] = "fnv1a64:" + content_hash(in);
  const nlohmann::json manifest = {
      {"tool", "skl"}, {"version", tool_version()}, {"command", command},
      {"args", args},  {"config", config.to_json()}, {"inputs", hashes},
  };
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << manifest.dump(2) << '\n';
}

}  // namespace skl::cli
