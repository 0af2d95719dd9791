#include "itt/persistence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "itt/error.hpp"
#include "itt/simd.hpp"
#include "internal/simplex_key.hpp"

namespace itt {
namespace {

constexpr std::uint32_t kNoColumn = std::numeric_limits<std::uint32_t>::max();

// a ^= b on sorted index lists.
void add_column(std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b, std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(scratch));
  a.swap(scratch);
}

std::string format_value(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::size_t Barcode::count(int dim) const {
  return static_cast<std::size_t>(std::count_if(bars.begin(), bars.end(), [&](const Bar& b) { return b.dim == dim; }));
}

void GridSpec::validate() const {
  if (!std::isfinite(start)) throw Error(Errc::InvalidArgument, "grid start must be finite");
  if (!(step > 0.0) || !std::isfinite(step)) throw Error(Errc::InvalidArgument, "grid step must be positive");
  if (count < 1) throw Error(Errc::InvalidArgument, "grid count must be at least 1");
}

int GridSpec::first_at_or_after(double value) const {
  if (std::isnan(value)) return count;
  // Estimate then correct against the exact grid points.
  double guess = std::ceil((value - start) / step);
  if (!(guess > 0)) guess = 0;
  if (guess > count) guess = count;
  int k = static_cast<int>(guess);
  while (k > 0 && point(k - 1) >= value) --k;
  while (k < count && point(k) < value) ++k;
  return k;
}

std::vector<std::uint32_t> BettiGrid::curve(int p) const {
  std::vector<std::uint32_t> out(static_cast<std::size_t>(grid.count));
  for (int k = 0; k < grid.count; ++k) out[static_cast<std::size_t>(k)] = at(k, p);
  return out;
}

BoundaryMatrix boundary_matrix(const Filtration& f) {
  BoundaryMatrix m;
  const std::size_t n = f.simplices.size();
  m.dims.resize(n);
  m.values.resize(n);
  m.columns.resize(n);
  std::unordered_map<detail::SimplexKey, std::uint32_t, detail::SimplexKeyHash> index;
  index.reserve(n);
  std::vector<std::uint32_t> facet;
  for (std::uint32_t j = 0; j < n; ++j) {
    const Simplex& s = f.simplices[j];
    if (s.vertices.empty() || s.vertices.size() > 4) throw Error(Errc::InvalidFiltration, "bad simplex size");
    m.dims[j] = s.dimension();
    m.values[j] = s.value;
    if (s.vertices.size() > 1) {
      auto& col = m.columns[j];
      for (std::size_t k = 0; k < s.vertices.size(); ++k) {
        facet.clear();
        for (std::size_t q = 0; q < s.vertices.size(); ++q)
          if (q != k) facet.push_back(s.vertices[q]);
        const auto it = index.find(detail::make_key(facet));
        if (it == index.end()) {
          throw Error(Errc::InvalidFiltration, "simplex " + std::to_string(j) + " has a face that is missing or later");
        }
        if (f.simplices[it->second].value > s.value) {
          throw Error(Errc::InvalidFiltration, "simplex " + std::to_string(j) + " enters before one of its faces");
        }
        col.push_back(it->second);
      }
      std::sort(col.begin(), col.end());
    }
    if (!index.emplace(detail::make_key(s.vertices), j).second) {
      throw Error(Errc::InvalidFiltration, "duplicate simplex at position " + std::to_string(j));
    }
  }
  return m;
}

Barcode reduce_boundary_matrix(const BoundaryMatrix& m, int max_dim) {
  const std::size_t n = m.size();
  int top = 0;
  for (std::size_t j = 0; j < n; ++j) {
    top = std::max(top, m.dims[j]);
    for (std::uint32_t i : m.columns[j]) {
      if (i >= j) throw Error(Errc::InvalidFiltration, "face after coface at column " + std::to_string(j));
    }
  }
  std::vector<std::uint32_t> pivot_of_row(n, kNoColumn);
  std::vector<std::uint32_t> partner(n, kNoColumn);
  std::vector<std::uint8_t> cleared(n, 0);
  std::vector<std::vector<std::uint32_t>> reduced(n);
  std::vector<std::uint32_t> work, scratch;
  for (int d = top; d >= 1; --d) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (m.dims[j] != d || cleared[j]) continue;
      work = m.columns[j];
      while (!work.empty()) {
        const std::uint32_t low = work.back();
        const std::uint32_t other = pivot_of_row[low];
        if (other == kNoColumn) break;
        add_column(work, reduced[other], scratch);
      }
      if (work.empty()) continue;
      const std::uint32_t low = work.back();
      pivot_of_row[low] = j;
      partner[low] = j;
      partner[j] = low;
      cleared[low] = 1;
      reduced[j] = std::move(work);
      work = {};
    }
  }

  Barcode b;
  b.max_dim = max_dim;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (m.dims[i] > max_dim) continue;
    if (partner[i] == kNoColumn) {
      b.bars.push_back({m.dims[i], m.values[i], std::numeric_limits<double>::infinity()});
    } else if (partner[i] > i && m.values[i] < m.values[partner[i]]) {
      b.bars.push_back({m.dims[i], m.values[i], m.values[partner[i]]});
    }
  }
  std::sort(b.bars.begin(), b.bars.end(), [](const Bar& x, const Bar& y) {
    if (x.dim != y.dim) return x.dim < y.dim;
    if (x.birth != y.birth) return x.birth < y.birth;
    return x.death < y.death;
  });
  return b;
}

Barcode reduce(const Filtration& f, int max_dim) { return reduce_boundary_matrix(boundary_matrix(f), max_dim); }

BettiGrid betti_curve(const Barcode& b, const GridSpec& grid, int max_dim) {
  grid.validate();
  BettiGrid out;
  out.grid = grid;
  out.max_dim = max_dim;
  const std::size_t width = static_cast<std::size_t>(max_dim + 1);
  // Difference array over grid indices: a bar covers [first >= birth, first >= death).
  std::vector<std::int64_t> delta((static_cast<std::size_t>(grid.count) + 1) * width, 0);
  for (const Bar& bar : b.bars) {
    if (bar.dim < 0 || bar.dim > max_dim) continue;
    const int lo = grid.first_at_or_after(bar.birth);
    const int hi = std::isinf(bar.death) ? grid.count : grid.first_at_or_after(bar.death);
    if (lo >= hi) continue;
    delta[static_cast<std::size_t>(lo) * width + static_cast<std::size_t>(bar.dim)] += 1;
    delta[static_cast<std::size_t>(hi) * width + static_cast<std::size_t>(bar.dim)] -= 1;
  }
  out.values.assign(static_cast<std::size_t>(grid.count) * width, 0);
  std::vector<std::int64_t> running(width, 0);
  for (int k = 0; k < grid.count; ++k) {
    for (std::size_t p = 0; p < width; ++p) {
      running[p] += delta[static_cast<std::size_t>(k) * width + p];
      out.values[static_cast<std::size_t>(k) * width + p] = static_cast<std::uint32_t>(running[p]);
    }
  }
  return out;
}

std::size_t gf2_rank(const std::vector<std::vector<std::uint32_t>>& columns, std::size_t rows) {
  if (columns.empty() || rows == 0) return 0;
  // Rows of the transpose as packed bit vectors; rank is the same.
  const std::size_t words = (rows + 63) / 64;
  std::vector<std::vector<std::uint64_t>> vecs;
  vecs.reserve(columns.size());
  for (const auto& col : columns) {
    std::vector<std::uint64_t> bits(words, 0);
    for (std::uint32_t r : col) {
      if (r >= rows) throw Error(Errc::InvalidArgument, "row index outside matrix");
      bits[r / 64] ^= std::uint64_t{1} << (r % 64);
    }
    vecs.push_back(std::move(bits));
  }
  const auto& xor_words = simd::kernels().xor_words;
  std::size_t rank = 0;
  for (std::size_t bit = 0; bit < rows && rank < vecs.size(); ++bit) {
    const std::size_t w = bit / 64;
    const std::uint64_t mask = std::uint64_t{1} << (bit % 64);
    std::size_t pivot = rank;
    while (pivot < vecs.size() && !(vecs[pivot][w] & mask)) ++pivot;
    if (pivot == vecs.size()) continue;
    std::swap(vecs[rank], vecs[pivot]);
    for (std::size_t r = rank + 1; r < vecs.size(); ++r) {
      if (vecs[r][w] & mask) xor_words(vecs[r].data() + w, vecs[rank].data() + w, words - w);
    }
    ++rank;
  }
  return rank;
}

namespace {

// Betti number of the subcomplex made of the columns flagged in `included`.
int dense_betti(const BoundaryMatrix& m, const std::vector<std::uint8_t>& included, int p) {
  std::vector<std::uint32_t> row_of(m.size(), std::numeric_limits<std::uint32_t>::max());
  std::size_t rows_p = 0, rows_pm1 = 0;
  std::size_t n_p = 0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (!included[j]) continue;
    if (m.dims[j] == p) {
      row_of[j] = static_cast<std::uint32_t>(rows_p++);
      ++n_p;
    } else if (m.dims[j] == p - 1) {
      row_of[j] = static_cast<std::uint32_t>(rows_pm1++);
    }
  }
  auto rank_of = [&](int dim, std::size_t rows) {
    std::vector<std::vector<std::uint32_t>> cols;
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (!included[j] || m.dims[j] != dim) continue;
      std::vector<std::uint32_t> col;
      for (std::uint32_t i : m.columns[j]) {
        if (!included[i]) throw Error(Errc::InvalidFiltration, "subcomplex is not closed under faces");
        col.push_back(row_of[i]);
      }
      cols.push_back(std::move(col));
    }
    return gf2_rank(cols, rows);
  };
  const std::size_t rank_p = p > 0 ? rank_of(p, rows_pm1) : 0;
  const std::size_t rank_p1 = rank_of(p + 1, rows_p);
  return static_cast<int>(n_p - rank_p - rank_p1);
}

void check_limit(const BoundaryMatrix& m, std::size_t limit) {
  if (m.size() > limit) {
    throw Error(Errc::TooLarge, std::to_string(m.size()) + " simplices exceed the dense oracle limit of " +
                                    std::to_string(limit));
  }
}

}  // namespace

int brute_force_betti(const BoundaryMatrix& m, double scale, int p, std::size_t limit) {
  check_limit(m, limit);
  std::vector<std::uint8_t> included(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) included[j] = m.values[j] <= scale;
  return dense_betti(m, included, p);
}

int brute_force_betti(const Filtration& f, double scale, int p) {
  if (f.simplices.size() > kBruteForceLimit) {
    throw Error(Errc::TooLarge, std::to_string(f.simplices.size()) + " simplices exceed the dense oracle limit");
  }
  return brute_force_betti(boundary_matrix(f), scale, p);
}

BettiGrid brute_force_betti_curve(const BoundaryMatrix& m, const GridSpec& grid, int max_dim, std::size_t limit) {
  check_limit(m, limit);
  grid.validate();
  BettiGrid out;
  out.grid = grid;
  out.max_dim = max_dim;
  out.values.assign(static_cast<std::size_t>(grid.count) * static_cast<std::size_t>(max_dim + 1), 0);
  // Grid points admitting the same set of simplices share one evaluation.
  std::size_t cached_count = std::numeric_limits<std::size_t>::max();
  std::vector<int> cached(static_cast<std::size_t>(max_dim + 1));
  std::vector<std::uint8_t> included(m.size());
  for (int k = 0; k < grid.count; ++k) {
    const double g = grid.point(k);
    std::size_t count = 0;
    for (std::size_t j = 0; j < m.size(); ++j) {
      included[j] = m.values[j] <= g;
      count += included[j];
    }
    if (count != cached_count) {
      for (int p = 0; p <= max_dim; ++p) cached[static_cast<std::size_t>(p)] = dense_betti(m, included, p);
      cached_count = count;
    }
    for (int p = 0; p <= max_dim; ++p) {
      out.values[static_cast<std::size_t>(k) * static_cast<std::size_t>(max_dim + 1) + static_cast<std::size_t>(p)] =
          static_cast<std::uint32_t>(cached[static_cast<std::size_t>(p)]);
    }
  }
  return out;
}

std::string barcode_csv(const Barcode& b) {
  std::string out = "dim,birth,death\n";
  for (const Bar& bar : b.bars) {
    out += std::to_string(bar.dim) + ',' + format_value(bar.birth) + ',' + format_value(bar.death) + '\n';
  }
  return out;
}

}  // namespace itt
