#include <arm_neon.h>

#include <cmath>

#include "itt/simd.hpp"

namespace itt::simd::detail {
namespace {

inline float64x2_t sq_dist2(float64x2_t px, float64x2_t py, float64x2_t pz, const double* xs,
                            const double* ys, const double* zs) {
  const float64x2_t dx = vsubq_f64(px, vld1q_f64(xs));
  const float64x2_t dy = vsubq_f64(py, vld1q_f64(ys));
  const float64x2_t dz = vsubq_f64(pz, vld1q_f64(zs));
  // Separate multiply and add: vfmaq would round differently from the scalar path.
  const float64x2_t xy = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
  return vaddq_f64(xy, vmulq_f64(dz, dz));
}

void squared_distances(Vec3 p, const double* xs, const double* ys, const double* zs,
                       std::size_t n, double* out) {
  const float64x2_t px = vdupq_n_f64(p.x), py = vdupq_n_f64(p.y), pz = vdupq_n_f64(p.z);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, sq_dist2(px, py, pz, xs + i, ys + i, zs + i));
  for (; i < n; ++i) {
    const double dx = p.x - xs[i], dy = p.y - ys[i], dz = p.z - zs[i];
    out[i] = (dx * dx + dy * dy) + dz * dz;
  }
}

void half_distances(Vec3 p, const double* xs, const double* ys, const double* zs,
                    std::size_t n, double* out) {
  const float64x2_t px = vdupq_n_f64(p.x), py = vdupq_n_f64(p.y), pz = vdupq_n_f64(p.z);
  const float64x2_t half = vdupq_n_f64(0.5);
  const float64x2_t quantum = vdupq_n_f64(kValueQuantum);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vmulq_f64(vsqrtq_f64(sq_dist2(px, py, pz, xs + i, ys + i, zs + i)), half);
    vst1q_f64(out + i, vmulq_f64(vrndnq_f64(vdivq_f64(d, quantum)), quantum));
  }
  for (; i < n; ++i) {
    const double dx = p.x - xs[i], dy = p.y - ys[i], dz = p.z - zs[i];
    const double h = std::sqrt((dx * dx + dy * dy) + dz * dz) * 0.5;
    out[i] = std::nearbyint(h / kValueQuantum) * kValueQuantum;
  }
}

void xor_words(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_u64(dst + i, veorq_u64(vld1q_u64(dst + i), vld1q_u64(src + i)));
  for (; i < n; ++i) dst[i] ^= src[i];
}

}  // namespace

const Kernels& neon_kernels() {
  static constexpr Kernels k{&squared_distances, &half_distances, &xor_words};
  return k;
}

}  // namespace itt::simd::detail
