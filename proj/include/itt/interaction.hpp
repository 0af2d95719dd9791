#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "itt/filtration.hpp"
#include "itt/persistence.hpp"

namespace itt {

enum class InteractionMode { centered, symmetric };

std::string_view mode_name(InteractionMode mode);
// Accepts "centered" or "symmetric"; throws InvalidArgument otherwise.
InteractionMode parse_mode(std::string_view text);

struct InteractionSimplex {
  Simplex left;   // from the center complex
  Simplex right;  // from the partner complex
  double value = 0;

  int dimension() const { return left.dimension() + right.dimension(); }
  friend bool operator==(const InteractionSimplex&, const InteractionSimplex&) = default;
};

// Value, then dimension, then (left vertices, right vertices).
bool interaction_less(const InteractionSimplex& a, const InteractionSimplex& b);

struct InteractionFiltration {
  std::vector<Vec3> center_points;
  std::vector<Vec3> partner_points;
  std::vector<InteractionSimplex> simplices;
  InteractionMode mode = InteractionMode::centered;
  double max_value = 25.0;
};

// Contact scale between two vertex sets: the largest half distance over all
// cross pairs. Using the max keeps every face no later than its coface.
double interaction_proximity(std::span<const Vec3> center, std::span<const std::uint32_t> left,
                             std::span<const Vec3> partner, std::span<const std::uint32_t> right);

// Generators (sigma, tau) with sigma from the center complex (vertices only in
// centered mode) and tau from the partner complex, total dimension <= 2.
// Throws EmptyCluster when either side has no points.
InteractionFiltration interaction_filtration(std::span<const Vec3> center, std::span<const Vec3> partner,
                                             InteractionMode mode = InteractionMode::centered,
                                             double max_value = 25.0, const Mat3& jitter_frame = Mat3::identity());

// Faces (d sigma, tau) + (sigma, d tau) with values looked up in f. Throws
// InvalidFiltration if a face is absent.
std::vector<InteractionSimplex> interaction_boundary(const InteractionFiltration& f, const InteractionSimplex& s);

BoundaryMatrix interaction_boundary_matrix(const InteractionFiltration& f);

// Persistent interaction homology, dims 0..max_dim.
Barcode pih(const InteractionFiltration& f, int max_dim = 1);

// Interaction barcode. Centered mode reduces one reweighted partner complex
// per center vertex (the complex is their direct sum); symmetric mode reduces
// the full interaction filtration.
Barcode interaction_barcode(std::span<const Vec3> center, std::span<const Vec3> partner, InteractionMode mode,
                            double max_value = 25.0, const Mat3& jitter_frame = Mat3::identity(), int max_dim = 1);

// H0 and H1 interaction Betti curves. Centered mode splits into one partner
// complex per center vertex and counts components, Euler characteristic and
// enclosed voids directly; symmetric mode runs the full reduction.
BettiGrid interaction_betti_curves(std::span<const Vec3> center, std::span<const Vec3> partner,
                                   InteractionMode mode, const GridSpec& grid = {}, double max_value = 25.0,
                                   const Mat3& jitter_frame = Mat3::identity());

}  // namespace itt
