// Copyright 2026 The Skillforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Little-endian primitive readers/writers shared by the cloud, dataset and
// model file formats. Readers track their byte offset so corruption errors can
// name where they happened.

#ifndef SKL_COMMON_BINARY_IO_HPP_
#define SKL_COMMON_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>

#include "skl/common/error.hpp"

namespace skl::io {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

inline void write_bytes(std::ostream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

inline void write_u32(std::ostream& out, std::uint32_t v) { write_bytes(out, &v, sizeof v); }
inline void write_f32(std::ostream& out, float v) { write_bytes(out, &v, sizeof v); }

inline void write_f32_span(std::ostream& out, std::span<const float> values) {
  write_bytes(out, values.data(), values.size_bytes());
}

class Reader {
 public:
  Reader(std::istream& in, std::string file) : in_(in), file_(std::move(file)) {}

  void read_bytes(void* dst, std::size_t n) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(in_.gcount());
    if (got != n) {
      throw FormatError(file_ + ": truncated at offset " + std::to_string(offset_ + got) +
                        ": expected " + std::to_string(n) + " bytes, got " +
                        std::to_string(got));
    }
    offset_ += n;
  }

  std::uint32_t u32() {
    std::uint32_t v = 0;
    read_bytes(&v, sizeof v);
    return v;
  }

  float f32() {
    float v = 0;
    read_bytes(&v, sizeof v);
    return v;
  }

  void f32_span(std::span<float> dst) { read_bytes(dst.data(), dst.size_bytes()); }

  void expect_magic(std::string_view magic) {
    std::string got(magic.size(), '\0');
    read_bytes(got.data(), got.size());
    if (got != magic) {
      throw FormatError(file_ + ": bad magic at offset 0: expected '" + std::string(magic) +
                        "'");
    }
  }

  /// Throws unless the stream is exhausted.
  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw FormatError(file_ + ": trailing bytes after offset " + std::to_string(offset_));
    }
  }

  [[nodiscard]] std::size_t offset() const { return offset_; }
  [[nodiscard]] const std::string& file() const { return file_; }

 private:
  std::istream& in_;
  std::string file_;
  std::size_t offset_ = 0;
};

}  // namespace skl::io

#endif  // SKL_COMMON_BINARY_IO_HPP_
