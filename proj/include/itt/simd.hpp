#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and ISA
// variants that must produce bit-identical output; the variant is picked at
// runtime from the CPU's capabilities (override with ITT_SIMD=scalar|avx2|neon).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "itt/geometry.hpp"

namespace itt::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

// Whether the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

// Best available ISA, or the ITT_SIMD override when it names an available one.
Isa active_isa() noexcept;

struct Kernels {
  // out[i] = (px-xs[i])^2 + (py-ys[i])^2 + (pz-zs[i])^2
  void (*squared_distances)(Vec3 p, const double* xs, const double* ys, const double* zs,
                            std::size_t n, double* out);
  // out[i] = quantize(sqrt(squared distance) / 2)
  void (*half_distances)(Vec3 p, const double* xs, const double* ys, const double* zs,
                         std::size_t n, double* out);
  // dst[i] ^= src[i]
  void (*xor_words)(std::uint64_t* dst, const std::uint64_t* src, std::size_t n);
};

const Kernels& kernels(Isa isa);
const Kernels& kernels();

// Structure-of-arrays copy of a point cloud, the layout the kernels stream.
struct PointsSoA {
  std::vector<double> x, y, z;

  PointsSoA() = default;
  explicit PointsSoA(std::span<const Vec3> points);

  std::size_t size() const { return x.size(); }

  void squared_distances_from(Vec3 p, std::span<double> out) const;
  void half_distances_from(Vec3 p, std::span<double> out) const;
};

namespace detail {
const Kernels& scalar_kernels();
#if defined(ITT_HAVE_AVX2_KERNELS)
const Kernels& avx2_kernels();
#endif
#if defined(ITT_HAVE_NEON_KERNELS)
const Kernels& neon_kernels();
#endif
}  // namespace detail

}  // namespace itt::simd
