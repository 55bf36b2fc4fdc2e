// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SKL_COMMON_LOG_HPP_
#define SKL_COMMON_LOG_HPP_

#include <sstream>
#include <string_view>

namespace skl::log {

enum class Level { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

/// Verbosity comes from the SKL_LOG environment variable
/// (error|warn|info|debug); defaults to warn.
Level threshold();
void set_threshold(Level level);
void write(Level level, std::string_view message);

template <typename... Args>
void emit(Level level, const Args&... args) {
  if (static_cast<int>(level) > static_cast<int>(threshold())) return;
  std::ostringstream os;
  (os << ... << args);
  write(level, os.str());
}

template <typename... Args>
void error(const Args&... args) { emit(Level::kError, args...); }
template <typename... Args>
void warn(const Args&... args) { emit(Level::kWarn, args...); }
template <typename... Args>
void info(const Args&... args) { emit(Level::kInfo, args...); }
template <typename... Args>
void debug(const Args&... args) { emit(Level::kDebug, args...); }

}  // namespace skl::log

#endif  // SKL_COMMON_LOG_HPP_
