#include <cmath>

#include "itt/simd.hpp"

namespace itt::simd::detail {
namespace {

void squared_distances(Vec3 p, const double* xs, const double* ys, const double* zs,
                       std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = p.x - xs[i];
    const double dy = p.y - ys[i];
    const double dz = p.z - zs[i];
    out[i] = (dx * dx + dy * dy) + dz * dz;
  }
}

void half_distances(Vec3 p, const double* xs, const double* ys, const double* zs,
                    std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = p.x - xs[i];
    const double dy = p.y - ys[i];
    const double dz = p.z - zs[i];
    const double half = std::sqrt((dx * dx + dy * dy) + dz * dz) * 0.5;
    out[i] = std::nearbyint(half / kValueQuantum) * kValueQuantum;
  }
}

void xor_words(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
}

}  // namespace

const Kernels& scalar_kernels() {
  static constexpr Kernels k{&squared_distances, &half_distances, &xor_words};
  return k;
}

}  // namespace itt::simd::detail
