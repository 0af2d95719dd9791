#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace itt {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return s * a; }
  friend constexpr bool operator==(Vec3 a, Vec3 b) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// Squared distance evaluated as (dx*dx + dy*dy) + dz*dz; the SIMD kernels
// use the same association so results agree bit for bit.
constexpr double squared_distance(Vec3 a, Vec3 b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return (dx * dx + dy * dy) + dz * dz;
}
inline double distance(Vec3 a, Vec3 b) { return std::sqrt(squared_distance(a, b)); }

// Row-major 3x3 matrix. When used as a lattice the rows are the cell vectors.
struct Mat3 {
  std::array<Vec3, 3> rows{};

  constexpr Vec3& operator[](int i) { return rows[static_cast<std::size_t>(i)]; }
  constexpr const Vec3& operator[](int i) const { return rows[static_cast<std::size_t>(i)]; }

  static constexpr Mat3 identity() { return Mat3{{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}}; }

  constexpr double determinant() const { return dot(rows[0], cross(rows[1], rows[2])); }
  constexpr Mat3 transposed() const {
    return Mat3{{Vec3{rows[0].x, rows[1].x, rows[2].x}, Vec3{rows[0].y, rows[1].y, rows[2].y},
                 Vec3{rows[0].z, rows[1].z, rows[2].z}}};
  }
  Mat3 inverse() const;

  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

// m * v (column vector).
constexpr Vec3 operator*(const Mat3& m, Vec3 v) { return {dot(m[0], v), dot(m[1], v), dot(m[2], v)}; }
Mat3 operator*(const Mat3& a, const Mat3& b);

// Row vector times matrix: frac * lattice -> Cartesian.
constexpr Vec3 row_times(Vec3 v, const Mat3& m) { return v.x * m[0] + v.y * m[1] + v.z * m[2]; }

// Values that feed grid comparisons are snapped to a 1e-9 lattice so that
// round-off from rigid motions cannot move a value across a grid point.
inline constexpr double kValueQuantum = 1e-9;
inline double quantize(double v) {
  if (!std::isfinite(v)) return v;
  return std::nearbyint(v / kValueQuantum) * kValueQuantum;
}

}  // namespace itt
