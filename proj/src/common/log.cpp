// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "skl/common/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace skl::log {
namespace {

Level parse_env() {
  const char* raw = std::getenv("SKL_LOG");
  if (raw == nullptr) return Level::kWarn;
  const std::string value(raw);
  if (value == "error") return Level::kError;
  if (value == "info") return Level::kInfo;
  if (value == "debug") return Level::kDebug;
  return Level::kWarn;
}

std::atomic<int>& level_storage() {
  static std::atomic<int> level{static_cast<int>(parse_env())};
  return level;
}

const char* tag(Level level) {
  switch (level) {
    case Level::kError: return "error";
    case Level::kWarn: return "warn";
    case Level::kInfo: return "info";
    case Level::kDebug: return "debug";
  }
  return "?";
}

}  // namespace

Level threshold() { return static_cast<Level>(level_storage().load()); }

void set_threshold(Level level) { level_storage().store(static_cast<int>(level)); }

void write(Level level, std::string_view message) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[" << tag(level) << "] " << message << '\n';
}

}  // namespace skl::log
