// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SKL_COMMON_ERROR_HPP_
#define SKL_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace skl {

/// Base class for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Planning or kinematics failure. The expert turns these into a FAILED
/// transcript instead of propagating them.
class PlanningError : public Error {
 public:
  using Error::Error;
};

class PerceptionError : public Error {
 public:
  using Error::Error;
};

/// Malformed, truncated or version-mismatched files.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values during training.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace skl

#endif  // SKL_COMMON_ERROR_HPP_
