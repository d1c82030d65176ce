#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>

namespace subvarx::detail {

inline std::uint64_t fnv1a(const std::string &bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

inline std::string fnv1a_hex(const std::string &bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016" PRIx64, fnv1a(bytes));
  return buf;
}

/// Canonical text form of a double for hashing: 17 significant digits.
inline void append_hashed(std::string &out, double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e,", value);
  out += buf;
}

} // namespace subvarx::detail
