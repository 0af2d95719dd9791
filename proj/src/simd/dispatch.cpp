#include <cstdlib>
#include <string>

#include "itt/simd.hpp"

namespace itt::simd {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(ITT_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(ITT_HAVE_NEON_KERNELS)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

namespace {

Isa pick_isa() noexcept {
  if (const char* env = std::getenv("ITT_SIMD")) {
    const std::string_view want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == isa_name(isa) && isa_available(isa)) return isa;
    }
  }
  if (isa_available(Isa::avx2)) return Isa::avx2;
  if (isa_available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

}  // namespace

Isa active_isa() noexcept {
  static const Isa isa = pick_isa();
  return isa;
}

const Kernels& kernels(Isa isa) {
  switch (isa) {
#if defined(ITT_HAVE_AVX2_KERNELS)
    case Isa::avx2:
      if (isa_available(Isa::avx2)) return detail::avx2_kernels();
      break;
#endif
#if defined(ITT_HAVE_NEON_KERNELS)
    case Isa::neon: return detail::neon_kernels();
#endif
    default: break;
  }
  return detail::scalar_kernels();
}

const Kernels& kernels() {
  static const Kernels& active = kernels(active_isa());
  return active;
}

PointsSoA::PointsSoA(std::span<const Vec3> points) {
  x.reserve(points.size());
  y.reserve(points.size());
  z.reserve(points.size());
  for (const Vec3& p : points) {
    x.push_back(p.x);
    y.push_back(p.y);
    z.push_back(p.z);
  }
}

void PointsSoA::squared_distances_from(Vec3 p, std::span<double> out) const {
  kernels().squared_distances(p, x.data(), y.data(), z.data(), size(), out.data());
}

void PointsSoA::half_distances_from(Vec3 p, std::span<double> out) const {
  kernels().half_distances(p, x.data(), y.data(), z.data(), size(), out.data());
}

}  // namespace itt::simd
