#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "itt/error.hpp"
#include "itt/simd.hpp"
#include "itt/structure.hpp"
#include "internal/periodic_scan.hpp"

namespace itt {
namespace {

// Exact values for the angles crystallographers actually write.
double cos_deg(double deg) {
  if (deg == 90.0) return 0.0;
  if (deg == 60.0) return 0.5;
  if (deg == 120.0) return -0.5;
  return std::cos(deg * std::numbers::pi / 180.0);
}

double sin_deg(double deg) {
  if (deg == 90.0) return 1.0;
  if (deg == 60.0 || deg == 120.0) return std::sqrt(3.0) / 2.0;
  return std::sin(deg * std::numbers::pi / 180.0);
}

double angle_between(Vec3 u, Vec3 v) {
  const double c = std::clamp(dot(u, v) / (norm(u) * norm(v)), -1.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

}  // namespace

Lattice Lattice::from_parameters(double a, double b, double c, double alpha, double beta, double gamma) {
  const double ca = cos_deg(alpha), cb = cos_deg(beta), cg = cos_deg(gamma), sg = sin_deg(gamma);
  const double cy = (ca - cb * cg) / sg;
  const double cz2 = 1.0 - cb * cb - cy * cy;
  Lattice l;
  l.vectors = Mat3{{Vec3{a, 0, 0}, Vec3{b * cg, b * sg, 0}, Vec3{c * cb, c * cy, c * std::sqrt(std::max(cz2, 0.0))}}};
  return l;
}

std::array<double, 3> Lattice::lengths() const {
  return {norm(vectors[0]), norm(vectors[1]), norm(vectors[2])};
}

std::array<double, 3> Lattice::angles() const {
  return {angle_between(vectors[1], vectors[2]), angle_between(vectors[0], vectors[2]),
          angle_between(vectors[0], vectors[1])};
}

std::array<double, 3> Lattice::heights() const {
  const double v = std::abs(volume());
  return {v / norm(cross(vectors[1], vectors[2])), v / norm(cross(vectors[2], vectors[0])),
          v / norm(cross(vectors[0], vectors[1]))};
}

Vec3 Lattice::to_fractional(Vec3 cart) const { return row_times(cart - origin, vectors.inverse()); }

void Lattice::validate() const {
  const double v = volume();
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(Errc::InvalidArgument, "lattice volume must be positive (got " + std::to_string(v) + ")");
  }
  for (double len : lengths()) {
    if (!(len > 0.1)) throw Error(Errc::InvalidArgument, "lattice vector shorter than 0.1 Å");
  }
}

double wrap_unit(double f) {
  double w = f - std::floor(f);
  if (w >= 1.0) w = 0.0;  // f slightly below an integer
  return w;
}

Vec3 wrap_unit(Vec3 f) { return {wrap_unit(f.x), wrap_unit(f.y), wrap_unit(f.z)}; }

Site make_site(const Lattice& lattice, int z, Vec3 frac) {
  Site s;
  s.z = z;
  s.frac = wrap_unit(frac);
  s.cart = lattice.to_cartesian(s.frac);
  return s;
}

std::array<int, 3> supercell_repeats(const Lattice& lattice, double target_edge) {
  std::array<int, 3> n{};
  const auto len = lattice.lengths();
  for (std::size_t i = 0; i < 3; ++i) n[i] = std::max(1, static_cast<int>(std::floor(target_edge / len[i] + 0.5)));
  return n;
}

Structure build_supercell(const Structure& s, double target_edge, std::size_t max_sites) {
  if (!(target_edge > 0.0)) throw Error(Errc::InvalidArgument, "supercell target edge must be positive");
  const auto n = supercell_repeats(s.lattice, target_edge);
  const std::size_t copies = static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]) * static_cast<std::size_t>(n[2]);
  if (s.sites.size() * copies > max_sites) {
    throw Error(Errc::TooManyAtoms, "supercell of " + std::to_string(s.sites.size() * copies) +
                                        " sites exceeds the cap of " + std::to_string(max_sites));
  }
  Structure out;
  out.source_id = s.source_id;
  out.lattice.origin = s.lattice.origin;
  for (int i = 0; i < 3; ++i) out.lattice.vectors[i] = static_cast<double>(n[static_cast<std::size_t>(i)]) * s.lattice.vectors[i];
  out.sites.reserve(s.sites.size() * copies);
  for (int a = 0; a < n[0]; ++a) {
    for (int b = 0; b < n[1]; ++b) {
      for (int c = 0; c < n[2]; ++c) {
        const Vec3 shift{static_cast<double>(a), static_cast<double>(b), static_cast<double>(c)};
        for (const Site& site : s.sites) {
          const Vec3 cell_frac = site.frac + shift;
          Site rep;
          rep.z = site.z;
          rep.frac = {cell_frac.x / n[0], cell_frac.y / n[1], cell_frac.z / n[2]};
          rep.cart = s.lattice.to_cartesian(cell_frac);
          out.sites.push_back(rep);
        }
      }
    }
  }
  return out;
}

Structure rigidly_moved(const Structure& s, const Mat3& rotation, Vec3 translation) {
  Structure out;
  out.source_id = s.source_id;
  for (int i = 0; i < 3; ++i) out.lattice.vectors[i] = rotation * s.lattice.vectors[i];
  out.lattice.origin = rotation * s.lattice.origin + translation;
  out.sites.reserve(s.sites.size());
  for (const Site& site : s.sites) {
    Site moved = site;
    moved.cart = out.lattice.to_cartesian(site.frac);
    out.sites.push_back(moved);
  }
  return out;
}

double min_image_distance(const Lattice& lattice, Vec3 frac_a, Vec3 frac_b, bool exclude_zero_image) {
  // Reduce the difference to [-0.5, 0.5) then scan neighboring images; for
  // skewed cells the nearest image can lie one step further out.
  Vec3 d = frac_b - frac_a;
  for (int k = 0; k < 3; ++k) d[k] -= std::floor(d[k] + 0.5);
  const auto h = lattice.heights();
  std::array<int, 3> reach{};
  const double span = norm(lattice.vectors[0]) + norm(lattice.vectors[1]) + norm(lattice.vectors[2]);
  for (std::size_t k = 0; k < 3; ++k) reach[k] = std::min(3, static_cast<int>(std::ceil(0.5 * span / h[k])));
  double best = std::numeric_limits<double>::infinity();
  for (int a = -reach[0]; a <= reach[0]; ++a) {
    for (int b = -reach[1]; b <= reach[1]; ++b) {
      for (int c = -reach[2]; c <= reach[2]; ++c) {
        const Vec3 f = d + Vec3{static_cast<double>(a), static_cast<double>(b), static_cast<double>(c)};
        if (exclude_zero_image && f.x == 0.0 && f.y == 0.0 && f.z == 0.0) continue;
        best = std::min(best, norm(row_times(f, lattice.vectors)));
      }
    }
  }
  return best;
}


std::vector<NeighborPair> neighbor_list(const Structure& s, double cutoff, bool periodic) {
  if (!(cutoff > 0.0)) throw Error(Errc::InvalidArgument, "neighbor cutoff must be positive");
  const std::size_t n = s.sites.size();
  std::vector<NeighborPair> out;
  // Minimum squared distance per (i, j >= i), gathered row by row.
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::size_t current = 0;
  auto flush = [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) {
      if (std::isfinite(best[j])) {
        out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), quantize(std::sqrt(best[j]))});
        best[j] = std::numeric_limits<double>::infinity();
      }
    }
  };
  detail::scan_images(s, cutoff, periodic, /*upper_only=*/true, [&](std::size_t i, std::size_t j, double d2) {
    if (i != current) {
      flush(current);
      current = i;
    }
    best[j] = std::min(best[j], d2);
  });
  if (n > 0) flush(current);
  std::sort(out.begin(), out.end(), [](const NeighborPair& a, const NeighborPair& b) {
    if (a.i != b.i) return a.i < b.i;
    if (a.j != b.j) return a.j < b.j;
    return a.distance < b.distance;
  });
  return out;
}

}  // namespace itt
