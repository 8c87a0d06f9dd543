#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace ccinterp {

/// 64-bit FNV-1a. Used for basis/trajectory/config checksums that external
/// snapshot producers have to reproduce, so the algorithm is part of the
/// container format.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Text that round-trips a double exactly ("%.17g").
inline std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace ccinterp
