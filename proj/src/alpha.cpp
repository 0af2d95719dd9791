#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "itt/error.hpp"
#include "itt/filtration.hpp"
#include "internal/simplex_key.hpp"

namespace itt {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Smallest circumscribing sphere of an edge or triangle; r2 is +inf when the
// triangle is collinear.
struct Sphere {
  Vec3 center;
  double r2 = 0;
};

Sphere triangle_sphere(Vec3 a, Vec3 b, Vec3 c) {
  const Vec3 u = b - a, v = c - a;
  const Vec3 n = cross(u, v);
  const double n2 = dot(n, n), uu = dot(u, u), vv = dot(v, v);
  if (!(n2 > 1e-20 * uu * vv)) return {a, kInfinity};
  const Vec3 offset = (1.0 / (2.0 * n2)) * (uu * cross(v, n) + vv * cross(n, u));
  const Vec3 w = u - v;
  return {a + offset, uu * vv * dot(w, w) / (4.0 * n2)};
}

double half_distance(Vec3 a, Vec3 b) { return std::sqrt(squared_distance(a, b)) * 0.5; }

double tetra_radius(const Vec3 p[4]) {
  const Vec3 u = p[1] - p[0], v = p[2] - p[0], w = p[3] - p[0];
  const double det = dot(u, cross(v, w));
  if (std::abs(det) > 1e-12 * norm(u) * norm(v) * norm(w)) {
    const Vec3 c = (1.0 / (2.0 * det)) * (dot(u, u) * cross(v, w) + dot(v, v) * cross(w, u) + dot(w, w) * cross(u, v));
    return norm(c);
  }
  // Flat: a sphere exists only when the four points share a circle.
  int best = -1;
  double best_area = 0;
  for (int k = 0; k < 4; ++k) {
    const Vec3 a = p[(k + 1) % 4], b = p[(k + 2) % 4], c = p[(k + 3) % 4];
    const Vec3 n = cross(b - a, c - a);
    if (dot(n, n) > best_area) {
      best_area = dot(n, n);
      best = k;
    }
  }
  if (best < 0) return kInfinity;
  const Sphere s = triangle_sphere(p[(best + 1) % 4], p[(best + 2) % 4], p[(best + 3) % 4]);
  if (!std::isfinite(s.r2)) return kInfinity;
  const double r = std::sqrt(s.r2);
  return std::abs(distance(p[best], s.center) - r) <= 1e-9 * r ? r : kInfinity;
}

std::string format_value(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Simplices of one dimension with the cofaces that contain them.
struct Level {
  std::vector<detail::SimplexKey> simplices;
  std::vector<double> values;
  std::vector<std::uint32_t> coface_begin;                         // size + 1 offsets
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cofaces;    // (coface index, opposite vertex)
};

Level faces_of(const Level& upper, std::size_t upper_size) {
  struct Entry {
    detail::SimplexKey face;
    std::uint32_t coface;
    std::uint32_t opposite;
  };
  std::vector<Entry> entries;
  entries.reserve(upper.simplices.size() * upper_size);
  for (std::uint32_t s = 0; s < upper.simplices.size(); ++s) {
    const auto& key = upper.simplices[s];
    for (std::size_t k = 0; k < upper_size; ++k) {
      detail::SimplexKey face{detail::kPad, detail::kPad, detail::kPad, detail::kPad};
      std::size_t j = 0;
      for (std::size_t m = 0; m < upper_size; ++m)
        if (m != k) face[j++] = key[m];
      entries.push_back({face, s, key[k]});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.face != b.face) return a.face < b.face;
    return a.coface < b.coface;
  });
  Level out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i == 0 || entries[i].face != entries[i - 1].face) {
      out.simplices.push_back(entries[i].face);
      out.coface_begin.push_back(static_cast<std::uint32_t>(out.cofaces.size()));
    }
    out.cofaces.emplace_back(entries[i].coface, entries[i].opposite);
  }
  out.coface_begin.push_back(static_cast<std::uint32_t>(out.cofaces.size()));
  return out;
}

}  // namespace

bool filtration_less(const Simplex& a, const Simplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
  return a.vertices < b.vertices;
}

void validate_filtration(const Filtration& f) {
  std::unordered_map<detail::SimplexKey, std::size_t, detail::SimplexKeyHash> index;
  index.reserve(f.simplices.size());
  for (std::size_t i = 0; i < f.simplices.size(); ++i) {
    const Simplex& s = f.simplices[i];
    const auto& v = s.vertices;
    if (v.empty() || v.size() > 4) throw Error(Errc::InvalidFiltration, "simplex must have 1 to 4 vertices");
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] >= f.points.size()) throw Error(Errc::InvalidFiltration, "vertex index out of range");
      if (k > 0 && v[k] <= v[k - 1]) throw Error(Errc::InvalidFiltration, "vertices must be strictly increasing");
    }
    if (!(s.value >= 0)) throw Error(Errc::InvalidFiltration, "negative or undefined filtration value");
    if (v.size() == 1 && s.value != 0) throw Error(Errc::InvalidFiltration, "vertices must enter at 0");
    if (i > 0 && !filtration_less(f.simplices[i - 1], s)) {
      throw Error(Errc::InvalidFiltration, "simplices out of filtration order at position " + std::to_string(i));
    }
    if (v.size() > 1) {
      for (std::size_t k = 0; k < v.size(); ++k) {
        std::vector<std::uint32_t> facet;
        for (std::size_t m = 0; m < v.size(); ++m)
          if (m != k) facet.push_back(v[m]);
        const auto it = index.find(detail::make_key(facet));
        if (it == index.end()) throw Error(Errc::InvalidFiltration, "face missing or after its coface");
        if (f.simplices[it->second].value > s.value) {
          throw Error(Errc::InvalidFiltration, "face value exceeds coface value");
        }
      }
    }
    index.emplace(detail::make_key(v), i);
  }
}

std::string filtration_csv(const Filtration& f) {
  std::string out = "dim,v0,v1,v2,v3,value\n";
  for (const Simplex& s : f.simplices) {
    out += std::to_string(s.dimension());
    for (std::size_t k = 0; k < 4; ++k) {
      out += ',';
      if (k < s.vertices.size()) out += std::to_string(s.vertices[k]);
    }
    out += ',' + format_value(s.value) + '\n';
  }
  return out;
}

double circumradius(std::span<const Vec3> pts) {
  switch (pts.size()) {
    case 1:
      return 0.0;
    case 2:
      return half_distance(pts[0], pts[1]);
    case 3: {
      const double r2 = triangle_sphere(pts[0], pts[1], pts[2]).r2;
      return std::isfinite(r2) ? std::sqrt(r2) : kInfinity;
    }
    case 4: {
      const Vec3 p[4] = {pts[0], pts[1], pts[2], pts[3]};
      return tetra_radius(p);
    }
    default:
      throw Error(Errc::InvalidArgument, "circumradius takes 1 to 4 points");
  }
}

Filtration alpha_filtration(std::span<const Vec3> points, double max_value, const Mat3& jitter_frame) {
  if (points.empty()) throw Error(Errc::InvalidArgument, "alpha filtration needs at least one point");
  Filtration f;
  f.points.assign(points.begin(), points.end());
  f.kind = FiltrationKind::alpha;
  f.max_value = max_value;

  const Triangulation tri = delaunay3d(points, jitter_frame);
  const int top = tri.dimension;
  std::vector<Level> levels(static_cast<std::size_t>(top) + 1);
  levels[static_cast<std::size_t>(top)].simplices = tri.cells;
  for (int d = top - 1; d >= 1; --d) {
    levels[static_cast<std::size_t>(d)] =
        faces_of(levels[static_cast<std::size_t>(d) + 1], static_cast<std::size_t>(d) + 2);
  }

  auto vertex_points = [&](const detail::SimplexKey& key, std::size_t size, Vec3* out) {
    for (std::size_t k = 0; k < size; ++k) out[k] = points[key[k]];
  };

  // Top cells take their circumradius. Lower simplices take theirs unless
  // some coface vertex lies inside the diametral sphere, in which case they
  // enter with their earliest coface.
  for (int d = top; d >= 1; --d) {
    Level& level = levels[static_cast<std::size_t>(d)];
    const std::size_t size = static_cast<std::size_t>(d) + 1;
    level.values.resize(level.simplices.size());
    for (std::size_t i = 0; i < level.simplices.size(); ++i) {
      Vec3 p[4];
      vertex_points(level.simplices[i], size, p);
      double own;
      Sphere sphere;
      if (d == 1) {
        own = half_distance(p[0], p[1]);
        sphere = {0.5 * (p[0] + p[1]), 0.25 * squared_distance(p[0], p[1])};
      } else if (d == 2) {
        sphere = triangle_sphere(p[0], p[1], p[2]);
        own = std::isfinite(sphere.r2) ? std::sqrt(sphere.r2) : kInfinity;
      } else {
        own = tetra_radius(p);
      }
      double value = own;
      if (d < top) {
        const Level& upper = levels[static_cast<std::size_t>(d) + 1];
        bool attached = false;
        double earliest = kInfinity;
        for (std::uint32_t c = level.coface_begin[i]; c < level.coface_begin[i + 1]; ++c) {
          const auto [coface, opposite] = level.cofaces[c];
          earliest = std::min(earliest, upper.values[coface]);
          if (std::isfinite(sphere.r2) && squared_distance(points[opposite], sphere.center) < sphere.r2 * (1.0 - 1e-10)) {
            attached = true;
          }
        }
        // A free simplex never enters after its cofaces; the min only absorbs round-off.
        value = attached ? earliest : std::min(own, earliest);
      }
      level.values[i] = quantize(value);
    }
  }

  f.simplices.reserve(points.size());
  for (std::uint32_t v = 0; v < points.size(); ++v) f.simplices.push_back({{v}, 0.0});
  for (int d = 1; d <= top; ++d) {
    const Level& level = levels[static_cast<std::size_t>(d)];
    for (std::size_t i = 0; i < level.simplices.size(); ++i) {
      if (!(level.values[i] <= max_value)) continue;
      Simplex s;
      s.vertices.assign(level.simplices[i].begin(), level.simplices[i].begin() + d + 1);
      s.value = level.values[i];
      f.simplices.push_back(std::move(s));
    }
  }
  std::sort(f.simplices.begin(), f.simplices.end(), filtration_less);
  return f;
}

Filtration rips_filtration(std::span<const Vec3> points, double max_value, int max_dim, std::size_t max_points) {
  if (points.empty()) throw Error(Errc::InvalidArgument, "Rips filtration needs at least one point");
  if (max_dim < 0 || max_dim > 3) throw Error(Errc::InvalidArgument, "Rips max_dim must lie in 0..3");
  if (points.size() > max_points) {
    throw Error(Errc::TooManyPoints, std::to_string(points.size()) + " points exceed the Rips limit of " +
                                         std::to_string(max_points));
  }
  const std::uint32_t n = static_cast<std::uint32_t>(points.size());
  std::vector<double> half(static_cast<std::size_t>(n) * n, 0.0);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) half[i * n + j] = quantize(half_distance(points[i], points[j]));

  Filtration f;
  f.points.assign(points.begin(), points.end());
  f.kind = FiltrationKind::rips;
  f.max_value = max_value;
  std::vector<std::uint32_t> current;
  auto extend = [&](auto&& self, double value) -> void {
    Simplex s{current, value};
    f.simplices.push_back(std::move(s));
    if (static_cast<int>(current.size()) > max_dim) return;
    for (std::uint32_t next = current.back() + 1; next < n; ++next) {
      double v = value;
      for (std::uint32_t u : current) v = std::max(v, half[u * n + next]);
      if (!(v <= max_value)) continue;
      current.push_back(next);
      self(self, v);
      current.pop_back();
    }
  };
  for (std::uint32_t v = 0; v < n; ++v) {
    current = {v};
    extend(extend, 0.0);
  }
  std::sort(f.simplices.begin(), f.simplices.end(), filtration_less);
  return f;
}

}  // namespace itt
