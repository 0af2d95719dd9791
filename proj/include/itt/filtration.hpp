#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "itt/geometry.hpp"

namespace itt {

struct Simplex {
  std::vector<std::uint32_t> vertices;  // strictly increasing, 1 to 4 entries
  double value = 0;                     // radius in Å

  int dimension() const { return static_cast<int>(vertices.size()) - 1; }
  friend bool operator==(const Simplex&, const Simplex&) = default;
};

// Filtration order: value, then dimension, then vertices lexicographically.
bool filtration_less(const Simplex& a, const Simplex& b);

enum class FiltrationKind { alpha, rips };

struct Filtration {
  std::vector<Vec3> points;
  std::vector<Simplex> simplices;
  FiltrationKind kind = FiltrationKind::alpha;
  double max_value = 25.0;
};

// Throws InvalidFiltration unless every face is present, earlier in the
// order, and no larger in value.
void validate_filtration(const Filtration& f);

// `dim,v0,v1,v2,v3,value` rows in filtration order.
std::string filtration_csv(const Filtration& f);

inline constexpr double kJitterMagnitude = 1e-7;

// Deterministic perturbation of point i, expressed in `frame` (rows are an
// orthonormal basis). Passing a frame that turns with the input keeps the
// perturbed cloud a rigid image of itself.
Vec3 jitter_offset(std::size_t index, const Mat3& frame);

struct Triangulation {
  int dimension = 0;  // 0..3; 3 unless fewer than four points
  // Top-dimensional cells with sorted vertices: tetrahedra, or for fewer than
  // four points the single triangle, edge or vertex.
  std::vector<std::array<std::uint32_t, 4>> cells;
  std::size_t cell_size = 4;
  // Adjacency across each face of each tetrahedron: index of the tetrahedron
  // opposite vertex k of cells[t], or kOutside on the hull.
  std::vector<std::array<std::uint32_t, 4>> neighbors;
  static constexpr std::uint32_t kOutside = std::numeric_limits<std::uint32_t>::max();
};

Triangulation delaunay3d(std::span<const Vec3> points, const Mat3& jitter_frame = Mat3::identity());

// Orientation and in-sphere signs on exact inputs (+1, 0, -1). orient3d is
// positive when d lies on the side of plane abc that (b-a)x(c-a) points to;
// in_sphere is positive when e is strictly inside the sphere through a
// positively oriented a, b, c, d.
int orient3d(Vec3 a, Vec3 b, Vec3 c, Vec3 d);
int in_sphere(Vec3 a, Vec3 b, Vec3 c, Vec3 d, Vec3 e);

// Radius of the smallest sphere through the given points, or +inf when none
// exists (collinear triangles, flat tetrahedra that are not concyclic).
double circumradius(std::span<const Vec3> pts);

Filtration alpha_filtration(std::span<const Vec3> points, double max_value = 25.0,
                            const Mat3& jitter_frame = Mat3::identity());

inline constexpr std::size_t kDefaultRipsMaxPoints = 64;

Filtration rips_filtration(std::span<const Vec3> points, double max_value, int max_dim,
                           std::size_t max_points = kDefaultRipsMaxPoints);

}  // namespace itt
