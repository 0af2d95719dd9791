#include "itt/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "itt/error.hpp"
#include "itt/simd.hpp"
#include "internal/simplex_key.hpp"

namespace itt {
namespace {

struct PairKey {
  detail::SimplexKey left, right;
  bool operator==(const PairKey&) const = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept {
    const detail::SimplexKeyHash h;
    return h(k.left) * 0x9e3779b97f4a7c15ull ^ h(k.right);
  }
};

PairKey key_of(const InteractionSimplex& s) {
  return {detail::make_key(s.left.vertices), detail::make_key(s.right.vertices)};
}

std::vector<std::vector<std::uint32_t>> facets(const std::vector<std::uint32_t>& v) {
  std::vector<std::vector<std::uint32_t>> out;
  if (v.size() < 2) return out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    std::vector<std::uint32_t> f;
    for (std::size_t m = 0; m < v.size(); ++m)
      if (m != k) f.push_back(v[m]);
    out.push_back(std::move(f));
  }
  return out;
}

class UnionFind {
 public:
  void reset(std::size_t n) {
    parent_.resize(n);
    std::iota(parent_.begin(), parent_.end(), 0u);
    components_ = n;
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
    --components_;
    return true;
  }
  std::size_t components() const { return components_; }

 private:
  std::vector<std::uint32_t> parent_;
  std::size_t components_ = 0;
};

// Indices grouped by bucket 0..count (count = never present).
struct Buckets {
  std::vector<std::uint32_t> begin, items;

  void fill(const std::vector<std::uint32_t>& bucket_of, int count) {
    begin.assign(static_cast<std::size_t>(count) + 2, 0);
    for (std::uint32_t b : bucket_of) ++begin[b + 1];
    for (std::size_t k = 1; k < begin.size(); ++k) begin[k] += begin[k - 1];
    items.resize(bucket_of.size());
    std::vector<std::uint32_t> cursor(begin.begin(), begin.end() - 1);
    for (std::uint32_t i = 0; i < bucket_of.size(); ++i) items[cursor[bucket_of[i]]++] = i;
  }
};

BettiGrid centered_curves(std::span<const Vec3> center, std::span<const Vec3> partner, const GridSpec& grid,
                          double max_value, const Mat3& frame) {
  const Filtration k2 = alpha_filtration(partner, max_value, frame);
  const int count = grid.count;
  auto bucket = [&](double v) -> std::uint32_t {
    if (!(v <= max_value)) return static_cast<std::uint32_t>(count);
    return static_cast<std::uint32_t>(grid.first_at_or_after(v));
  };

  struct Edge {
    std::uint32_t a, b, bucket;
  };
  struct Triangle {
    std::uint32_t a, b, c, bucket, side0, side1;
  };
  std::vector<Edge> edges;
  std::vector<Triangle> triangles;
  std::vector<std::uint32_t> vertex_bucket(partner.size(), 0);
  std::unordered_map<detail::SimplexKey, std::uint32_t, detail::SimplexKeyHash> triangle_index;
  for (const Simplex& s : k2.simplices) {
    const auto& v = s.vertices;
    if (v.size() == 2) edges.push_back({v[0], v[1], bucket(s.value)});
    if (v.size() == 3) {
      triangle_index.emplace(detail::make_key(v), static_cast<std::uint32_t>(triangles.size()));
      triangles.push_back({v[0], v[1], v[2], bucket(s.value), 0, 0});
    }
  }

  // Voids: components of the complement, tracked on the dual graph of the
  // triangulation (tetrahedra plus one outer cell) joined across triangles
  // that are absent at the current scale.
  const Triangulation tri = delaunay3d(partner, frame);
  const bool solid = tri.dimension == 3;
  const std::uint32_t outer = static_cast<std::uint32_t>(tri.cells.size());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> always_open;
  if (solid) {
    for (std::uint32_t t = 0; t < tri.cells.size(); ++t) {
      for (std::size_t k = 0; k < 4; ++k) {
        const std::uint32_t other = tri.neighbors[t][k] == Triangulation::kOutside ? outer : tri.neighbors[t][k];
        if (other != outer && other < t) continue;  // each interior face once
        std::vector<std::uint32_t> face;
        for (std::size_t m = 0; m < 4; ++m)
          if (m != k) face.push_back(tri.cells[t][m]);
        const auto it = triangle_index.find(detail::make_key(face));
        if (it == triangle_index.end()) {
          always_open.emplace_back(t, other);
        } else {
          triangles[it->second].side0 = t;
          triangles[it->second].side1 = other;
        }
      }
    }
  }

  const std::size_t slots = static_cast<std::size_t>(count) + 1;
  std::vector<std::int64_t> beta0(static_cast<std::size_t>(count), 0), beta1(static_cast<std::size_t>(count), 0);
  std::vector<std::int64_t> cnt_v(slots), cnt_e(slots), cnt_f(slots), merges(slots), voids(static_cast<std::size_t>(count));
  std::vector<std::uint32_t> e_bucket(edges.size()), f_bucket(triangles.size());
  std::vector<double> half(partner.size());
  const simd::PointsSoA soa(partner);
  Buckets e_groups, f_groups;
  UnionFind uf, dual;

  for (const Vec3& c : center) {
    soa.half_distances_from(c, half);
    std::fill(cnt_v.begin(), cnt_v.end(), 0);
    std::fill(cnt_e.begin(), cnt_e.end(), 0);
    std::fill(cnt_f.begin(), cnt_f.end(), 0);
    std::fill(merges.begin(), merges.end(), 0);
    for (std::size_t w = 0; w < partner.size(); ++w) {
      vertex_bucket[w] = bucket(half[w]);
      ++cnt_v[vertex_bucket[w]];
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge& e = edges[i];
      e_bucket[i] = std::max({e.bucket, vertex_bucket[e.a], vertex_bucket[e.b]});
      ++cnt_e[e_bucket[i]];
    }
    for (std::size_t i = 0; i < triangles.size(); ++i) {
      const Triangle& t = triangles[i];
      f_bucket[i] = std::max({t.bucket, vertex_bucket[t.a], vertex_bucket[t.b], vertex_bucket[t.c]});
      ++cnt_f[f_bucket[i]];
    }

    e_groups.fill(e_bucket, count);
    uf.reset(partner.size());
    for (int k = 0; k < count; ++k) {
      for (std::uint32_t q = e_groups.begin[static_cast<std::size_t>(k)]; q < e_groups.begin[static_cast<std::size_t>(k) + 1]; ++q) {
        const Edge& e = edges[e_groups.items[q]];
        if (uf.unite(e.a, e.b)) ++merges[static_cast<std::size_t>(k)];
      }
    }

    if (solid) {
      f_groups.fill(f_bucket, count);
      dual.reset(static_cast<std::size_t>(outer) + 1);
      for (const auto& [a, b] : always_open) dual.unite(a, b);
      auto open_bucket = [&](std::size_t k) {
        for (std::uint32_t q = f_groups.begin[k]; q < f_groups.begin[k + 1]; ++q) {
          const Triangle& t = triangles[f_groups.items[q]];
          dual.unite(t.side0, t.side1);
        }
      };
      open_bucket(static_cast<std::size_t>(count));
      for (int k = count - 1; k >= 0; --k) {
        voids[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(dual.components()) - 1;
        open_bucket(static_cast<std::size_t>(k));
      }
    }

    std::int64_t v = 0, e = 0, f = 0, m = 0;
    for (int k = 0; k < count; ++k) {
      const std::size_t ks = static_cast<std::size_t>(k);
      v += cnt_v[ks];
      e += cnt_e[ks];
      f += cnt_f[ks];
      m += merges[ks];
      const std::int64_t b0 = v - m;
      const std::int64_t b2 = solid ? voids[ks] : 0;
      const std::int64_t euler = v - e + f;
      beta0[ks] += b0;
      beta1[ks] += b0 + b2 - euler;
    }
  }

  BettiGrid out;
  out.grid = grid;
  out.max_dim = 1;
  out.values.resize(static_cast<std::size_t>(count) * 2);
  for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
    out.values[2 * k] = static_cast<std::uint32_t>(beta0[k]);
    out.values[2 * k + 1] = static_cast<std::uint32_t>(beta1[k]);
  }
  return out;
}

}  // namespace

std::string_view mode_name(InteractionMode mode) {
  return mode == InteractionMode::centered ? "centered" : "symmetric";
}

InteractionMode parse_mode(std::string_view text) {
  if (text == "centered") return InteractionMode::centered;
  if (text == "symmetric") return InteractionMode::symmetric;
  throw Error(Errc::InvalidArgument, "interaction mode must be centered or symmetric, got '" + std::string(text) + "'");
}

bool interaction_less(const InteractionSimplex& a, const InteractionSimplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
  if (a.left.vertices != b.left.vertices) return a.left.vertices < b.left.vertices;
  return a.right.vertices < b.right.vertices;
}

double interaction_proximity(std::span<const Vec3> center, std::span<const std::uint32_t> left,
                             std::span<const Vec3> partner, std::span<const std::uint32_t> right) {
  double v = 0;
  for (std::uint32_t u : left)
    for (std::uint32_t w : right) v = std::max(v, quantize(std::sqrt(squared_distance(center[u], partner[w])) * 0.5));
  return v;
}

InteractionFiltration interaction_filtration(std::span<const Vec3> center, std::span<const Vec3> partner,
                                             InteractionMode mode, double max_value, const Mat3& jitter_frame) {
  if (center.empty() || partner.empty()) throw Error(Errc::EmptyCluster, "interaction needs points on both sides");
  InteractionFiltration f;
  f.center_points.assign(center.begin(), center.end());
  f.partner_points.assign(partner.begin(), partner.end());
  f.mode = mode;
  f.max_value = max_value;

  std::vector<Simplex> left;
  if (mode == InteractionMode::centered) {
    for (std::uint32_t v = 0; v < center.size(); ++v) left.push_back({{v}, 0.0});
  } else {
    for (const Simplex& s : alpha_filtration(center, max_value, jitter_frame).simplices)
      if (s.dimension() <= 2) left.push_back(s);
  }
  std::vector<Simplex> right;
  for (const Simplex& s : alpha_filtration(partner, max_value, jitter_frame).simplices)
    if (s.dimension() <= 2) right.push_back(s);

  for (const Simplex& l : left) {
    for (const Simplex& r : right) {
      if (l.dimension() + r.dimension() > 2) continue;
      const double value = std::max({l.value, r.value, interaction_proximity(center, l.vertices, partner, r.vertices)});
      if (!(value <= max_value)) continue;
      f.simplices.push_back({l, r, value});
    }
  }
  std::sort(f.simplices.begin(), f.simplices.end(), interaction_less);
  return f;
}

namespace {

std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> boundary_terms(const InteractionSimplex& s) {
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> terms;
  for (auto& l : facets(s.left.vertices)) terms.emplace_back(std::move(l), s.right.vertices);
  for (auto& r : facets(s.right.vertices)) terms.emplace_back(s.left.vertices, std::move(r));
  return terms;
}

}  // namespace

std::vector<InteractionSimplex> interaction_boundary(const InteractionFiltration& f, const InteractionSimplex& s) {
  std::unordered_map<PairKey, std::size_t, PairKeyHash> index;
  index.reserve(f.simplices.size());
  for (std::size_t i = 0; i < f.simplices.size(); ++i) index.emplace(key_of(f.simplices[i]), i);
  std::vector<InteractionSimplex> chain;
  for (const auto& [l, r] : boundary_terms(s)) {
    const auto it = index.find({detail::make_key(l), detail::make_key(r)});
    if (it == index.end()) throw Error(Errc::InvalidFiltration, "interaction face missing from filtration");
    chain.push_back(f.simplices[it->second]);
  }
  return chain;
}

BoundaryMatrix interaction_boundary_matrix(const InteractionFiltration& f) {
  BoundaryMatrix m;
  const std::size_t n = f.simplices.size();
  m.dims.resize(n);
  m.values.resize(n);
  m.columns.resize(n);
  std::unordered_map<PairKey, std::uint32_t, PairKeyHash> index;
  index.reserve(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    const InteractionSimplex& s = f.simplices[j];
    m.dims[j] = s.dimension();
    m.values[j] = s.value;
    for (const auto& [l, r] : boundary_terms(s)) {
      const auto it = index.find({detail::make_key(l), detail::make_key(r)});
      if (it == index.end()) {
        throw Error(Errc::InvalidFiltration, "interaction simplex " + std::to_string(j) + " has a missing or later face");
      }
      if (f.simplices[it->second].value > s.value) {
        throw Error(Errc::InvalidFiltration, "interaction simplex " + std::to_string(j) + " enters before a face");
      }
      m.columns[j].push_back(it->second);
    }
    std::sort(m.columns[j].begin(), m.columns[j].end());
    if (!index.emplace(key_of(s), j).second) throw Error(Errc::InvalidFiltration, "duplicate interaction simplex");
  }
  return m;
}

Barcode pih(const InteractionFiltration& f, int max_dim) {
  return reduce_boundary_matrix(interaction_boundary_matrix(f), max_dim);
}

Barcode interaction_barcode(std::span<const Vec3> center, std::span<const Vec3> partner, InteractionMode mode,
                            double max_value, const Mat3& jitter_frame, int max_dim) {
  if (center.empty() || partner.empty()) throw Error(Errc::EmptyCluster, "interaction needs points on both sides");
  if (mode == InteractionMode::symmetric) {
    return pih(interaction_filtration(center, partner, mode, max_value, jitter_frame), max_dim);
  }
  Filtration k2 = alpha_filtration(partner, max_value, jitter_frame);
  std::erase_if(k2.simplices, [](const Simplex& s) { return s.dimension() > 2; });
  const BoundaryMatrix base = boundary_matrix(k2);
  const std::size_t n = base.size();
  std::vector<double> half(partner.size());
  const simd::PointsSoA soa(partner);
  std::vector<double> value(n);
  std::vector<std::uint32_t> order(n), position(n);
  Barcode out;
  out.max_dim = max_dim;
  for (const Vec3& c : center) {
    soa.half_distances_from(c, half);
    for (std::size_t j = 0; j < n; ++j) {
      double v = base.values[j];
      for (std::uint32_t w : k2.simplices[j].vertices) v = std::max(v, half[w]);
      value[j] = v;
    }
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (value[a] != value[b]) return value[a] < value[b];
      if (base.dims[a] != base.dims[b]) return base.dims[a] < base.dims[b];
      return k2.simplices[a].vertices < k2.simplices[b].vertices;
    });
    BoundaryMatrix m;
    for (std::uint32_t i = 0; i < n; ++i) position[order[i]] = i;
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t j = order[i];
      if (!(value[j] <= max_value)) break;
      m.dims.push_back(base.dims[j]);
      m.values.push_back(value[j]);
      std::vector<std::uint32_t> col;
      for (std::uint32_t face : base.columns[j]) col.push_back(position[face]);
      std::sort(col.begin(), col.end());
      m.columns.push_back(std::move(col));
    }
    const Barcode part = reduce_boundary_matrix(m, max_dim);
    out.bars.insert(out.bars.end(), part.bars.begin(), part.bars.end());
  }
  std::sort(out.bars.begin(), out.bars.end(), [](const Bar& x, const Bar& y) {
    if (x.dim != y.dim) return x.dim < y.dim;
    if (x.birth != y.birth) return x.birth < y.birth;
    return x.death < y.death;
  });
  return out;
}

BettiGrid interaction_betti_curves(std::span<const Vec3> center, std::span<const Vec3> partner, InteractionMode mode,
                                   const GridSpec& grid, double max_value, const Mat3& jitter_frame) {
  grid.validate();
  if (center.empty() || partner.empty()) throw Error(Errc::EmptyCluster, "interaction needs points on both sides");
  if (mode == InteractionMode::centered) return centered_curves(center, partner, grid, max_value, jitter_frame);
  return betti_curve(pih(interaction_filtration(center, partner, mode, max_value, jitter_frame), 1), grid, 1);
}

}  // namespace itt
