// Compiled with -mavx2 (and without FMA) so the arithmetic order matches the
// scalar reference exactly.

#include <immintrin.h>

#include <cmath>

#include "itt/simd.hpp"

namespace itt::simd::detail {
namespace {

inline __m256d sq_dist4(__m256d px, __m256d py, __m256d pz, const double* xs, const double* ys,
                        const double* zs) {
  const __m256d dx = _mm256_sub_pd(px, _mm256_loadu_pd(xs));
  const __m256d dy = _mm256_sub_pd(py, _mm256_loadu_pd(ys));
  const __m256d dz = _mm256_sub_pd(pz, _mm256_loadu_pd(zs));
  const __m256d xy = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
  return _mm256_add_pd(xy, _mm256_mul_pd(dz, dz));
}

void squared_distances(Vec3 p, const double* xs, const double* ys, const double* zs,
                       std::size_t n, double* out) {
  const __m256d px = _mm256_set1_pd(p.x), py = _mm256_set1_pd(p.y), pz = _mm256_set1_pd(p.z);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, sq_dist4(px, py, pz, xs + i, ys + i, zs + i));
  for (; i < n; ++i) {
    const double dx = p.x - xs[i], dy = p.y - ys[i], dz = p.z - zs[i];
    out[i] = (dx * dx + dy * dy) + dz * dz;
  }
}

void half_distances(Vec3 p, const double* xs, const double* ys, const double* zs,
                    std::size_t n, double* out) {
  const __m256d px = _mm256_set1_pd(p.x), py = _mm256_set1_pd(p.y), pz = _mm256_set1_pd(p.z);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d quantum = _mm256_set1_pd(kValueQuantum);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_mul_pd(_mm256_sqrt_pd(sq_dist4(px, py, pz, xs + i, ys + i, zs + i)), half);
    const __m256d steps =
        _mm256_round_pd(_mm256_div_pd(d, quantum), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(steps, quantum));
  }
  for (; i < n; ++i) {
    const double dx = p.x - xs[i], dy = p.y - ys[i], dz = p.z - zs[i];
    const double h = std::sqrt((dx * dx + dy * dy) + dz * dz) * 0.5;
    out[i] = std::nearbyint(h / kValueQuantum) * kValueQuantum;
  }
}

void xor_words(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_xor_si256(a, b));
  }
  for (; i < n; ++i) dst[i] ^= src[i];
}

}  // namespace

const Kernels& avx2_kernels() {
  static constexpr Kernels k{&squared_distances, &half_distances, &xor_words};
  return k;
}

}  // namespace itt::simd::detail
