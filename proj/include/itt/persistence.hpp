#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "itt/filtration.hpp"

namespace itt {

struct Bar {
  int dim = 0;
  double birth = 0;
  double death = 0;  // +inf for classes that never die

  friend bool operator==(const Bar&, const Bar&) = default;
};

struct Barcode {
  std::vector<Bar> bars;  // sorted by (dim, birth, death)
  int max_dim = 2;

  std::size_t count(int dim) const;
};

struct GridSpec {
  double start = 0.0;
  double step = 0.1;
  int count = 250;

  double point(int k) const { return start + static_cast<double>(k) * step; }
  // Throws InvalidArgument unless step > 0, count >= 1 and start is finite.
  void validate() const;
  // Index of the first grid point g with value <= g, or count when none.
  int first_at_or_after(double value) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct BettiGrid {
  GridSpec grid;
  int max_dim = 0;
  std::vector<std::uint32_t> values;  // values[k * (max_dim + 1) + p]

  std::uint32_t at(int k, int p) const {
    return values[static_cast<std::size_t>(k) * static_cast<std::size_t>(max_dim + 1) + static_cast<std::size_t>(p)];
  }
  std::vector<std::uint32_t> curve(int p) const;
};

// Columns of a filtered chain complex in filtration order. Each column lists
// the indices of its boundary faces in ascending order; every index must be
// smaller than the column's own.
struct BoundaryMatrix {
  std::vector<int> dims;
  std::vector<double> values;
  std::vector<std::vector<std::uint32_t>> columns;

  std::size_t size() const { return columns.size(); }
};

// Throws InvalidFiltration when a face is missing or comes after its coface.
BoundaryMatrix boundary_matrix(const Filtration& f);

// GF(2) column reduction, highest dimension first with clearing.
Barcode reduce_boundary_matrix(const BoundaryMatrix& m, int max_dim);
Barcode reduce(const Filtration& f, int max_dim = 2);

BettiGrid betti_curve(const Barcode& b, const GridSpec& grid = {}, int max_dim = 2);

// Rank of a GF(2) matrix given as sparse columns over `rows` rows.
std::size_t gf2_rank(const std::vector<std::vector<std::uint32_t>>& columns, std::size_t rows);

inline constexpr std::size_t kBruteForceLimit = 2000;

// dim H_p of the subcomplex with value <= scale, by dense elimination.
// Throws TooLarge above `limit` columns.
int brute_force_betti(const BoundaryMatrix& m, double scale, int p, std::size_t limit = kBruteForceLimit);
int brute_force_betti(const Filtration& f, double scale, int p);

// Dense-rank Betti numbers at every grid point for dims 0..max_dim.
BettiGrid brute_force_betti_curve(const BoundaryMatrix& m, const GridSpec& grid, int max_dim,
                                  std::size_t limit = kBruteForceLimit);

// `dim,birth,death` rows, `inf` for infinite deaths.
std::string barcode_csv(const Barcode& b);

}  // namespace itt
