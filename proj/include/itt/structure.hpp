#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "itt/clusters.hpp"
#include "itt/geometry.hpp"

namespace itt {

struct Lattice {
  Mat3 vectors;     // rows are the cell vectors a, b, c in Å
  Vec3 origin{};    // Cartesian position of fractional (0, 0, 0)

  // Standard orientation: a along x, b in the xy plane. Angles in degrees.
  static Lattice from_parameters(double a, double b, double c, double alpha, double beta,
                                 double gamma);

  double volume() const { return vectors.determinant(); }
  std::array<double, 3> lengths() const;
  std::array<double, 3> angles() const;
  // Perpendicular distance between opposite faces for each axis.
  std::array<double, 3> heights() const;

  Vec3 to_cartesian(Vec3 frac) const { return origin + row_times(frac, vectors); }
  Vec3 to_fractional(Vec3 cart) const;

  // Throws InvalidArgument unless volume > 0 and every length > 0.1 Å.
  void validate() const;
};

struct Site {
  int z = 0;
  Vec3 frac;  // wrapped into [0, 1)
  Vec3 cart;
};

struct Structure {
  Lattice lattice;
  std::vector<Site> sites;
  std::string source_id;
};

// Collects non-fatal parser diagnostics when non-null.
using Warnings = std::vector<std::string>;

// CIF subset: cell parameters, symmetry operations, fractional atom-site loop.
Structure parse_cif(std::string_view text, Warnings* warnings = nullptr);
// Extended XYZ with a Lattice="ax ay az bx by bz cx cy cz" comment entry.
Structure parse_xyz(std::string_view text, Warnings* warnings = nullptr);
// Dispatches on extension (.cif, .xyz/.extxyz); source_id is the file stem.
Structure read_structure_file(const std::filesystem::path& path, Warnings* warnings = nullptr);

std::string write_cif(const Structure& s);
std::string write_xyz(const Structure& s);

// Wraps a fractional coordinate into [0, 1).
double wrap_unit(double f);
Vec3 wrap_unit(Vec3 f);

// Builds a Site from fractional coordinates, wrapping and deriving Cartesian.
Site make_site(const Lattice& lattice, int z, Vec3 frac);

// Replication counts max(1, round-half-up(target / length)) per axis.
std::array<int, 3> supercell_repeats(const Lattice& lattice, double target_edge);

inline constexpr std::size_t kDefaultMaxSupercellSites = 500'000;

Structure build_supercell(const Structure& s, double target_edge = 64.0,
                          std::size_t max_sites = kDefaultMaxSupercellSites);

// Same structure after a rigid motion of space: lattice vectors and origin
// move with it, fractional coordinates are untouched.
Structure rigidly_moved(const Structure& s, const Mat3& rotation, Vec3 translation);

struct NeighborPair {
  std::uint32_t i = 0, j = 0;  // i <= j
  double distance = 0;

  friend bool operator==(const NeighborPair&, const NeighborPair&) = default;
};

// Each unordered pair (self pairs included when periodic images are within
// reach) once, at its minimum-image distance; sorted by (i, j, distance).
std::vector<NeighborPair> neighbor_list(const Structure& s, double cutoff = 8.0, bool periodic = true);

// Minimum-image distance between two fractional positions (excluding the
// zero image when exclude_zero_image is set).
double min_image_distance(const Lattice& lattice, Vec3 frac_a, Vec3 frac_b, bool exclude_zero_image = false);

struct AtomicNode {
  int z = 0;
  int cluster = 0;
  Vec3 position;  // Cartesian position of the class representative
  std::uint32_t multiplicity = 0;
  std::uint64_t key_hash = 0;

  friend bool operator==(const AtomicNode&, const AtomicNode&) = default;
};

struct AtomicEdge {
  std::uint32_t i = 0, j = 0;  // i < j
  double distance = 0;

  friend bool operator==(const AtomicEdge&, const AtomicEdge&) = default;
};

struct AtomicGraph {
  std::vector<AtomicNode> nodes;
  std::vector<AtomicEdge> edges;
  double cutoff = 8.0;
  bool truncated = false;
  std::size_t unique_count = 0;  // before truncation

  friend bool operator==(const AtomicGraph&, const AtomicGraph&) = default;
};

inline constexpr std::size_t kMaxAtomicTokens = 256;

// Collapses sites with identical local environments (own element plus the
// sorted (element, distance) list of periodic neighbors within the cutoff,
// distances rounded to round_tol) into weighted nodes.
AtomicGraph unique_atoms(const Structure& s, const ClusterAssignment& clusters, double cutoff = 8.0,
                         double round_tol = 1e-3, std::size_t cap = kMaxAtomicTokens);

}  // namespace itt
