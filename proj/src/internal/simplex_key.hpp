#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace itt::detail {

// Up to four sorted vertex ids padded with kPad; usable as a hash-map key.
using SimplexKey = std::array<std::uint32_t, 4>;
inline constexpr std::uint32_t kPad = std::numeric_limits<std::uint32_t>::max();

inline SimplexKey make_key(std::span<const std::uint32_t> vertices) {
  SimplexKey k{kPad, kPad, kPad, kPad};
  for (std::size_t i = 0; i < vertices.size(); ++i) k[i] = vertices[i];
  return k;
}

struct SimplexKeyHash {
  std::size_t operator()(const SimplexKey& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::uint32_t v : k) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }
};

}  // namespace itt::detail
