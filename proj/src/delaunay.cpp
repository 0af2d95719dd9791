#include <algorithm>
#include <cstdint>
#include <limits>

#include "itt/error.hpp"
#include "itt/filtration.hpp"

namespace itt {
namespace {

constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double unit_symmetric(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-52 - 1.0; }

std::uint64_t spread_bits(std::uint64_t v) {
  v &= 0x1fffff;
  v = (v | v << 32) & 0x1f00000000ffffull;
  v = (v | v << 16) & 0x1f0000ff0000ffull;
  v = (v | v << 8) & 0x100f00f00f00f00full;
  v = (v | v << 4) & 0x10c30c30c30c30c3ull;
  v = (v | v << 2) & 0x1249249249249249ull;
  return v;
}

// Insertion order along a Morton curve keeps point-location walks short.
std::vector<std::uint32_t> spatial_order(std::span<const Vec3> p) {
  Vec3 lo = p[0], hi = p[0];
  for (const Vec3& q : p) {
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], q[k]);
      hi[k] = std::max(hi[k], q[k]);
    }
  }
  double extent = 0;
  for (int k = 0; k < 3; ++k) extent = std::max(extent, hi[k] - lo[k]);
  const double scale = extent > 0 ? static_cast<double>((1u << 21) - 1) / extent : 0.0;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::uint64_t code = 0;
    for (int k = 0; k < 3; ++k) code |= spread_bits(static_cast<std::uint64_t>((p[i][k] - lo[k]) * scale)) << k;
    keyed[i] = {code, static_cast<std::uint32_t>(i)};
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::uint32_t> order(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) order[i] = keyed[i].second;
  return order;
}

struct Cell {
  std::array<std::uint32_t, 4> v;
  std::array<std::uint32_t, 4> nb;
};

class Builder {
 public:
  explicit Builder(std::span<const Vec3> pts) : p_(pts) {}

  void run() {
    const auto order = spatial_order(p_);
    const auto seed = initial_tetrahedron(order);
    for (std::uint32_t q : order) {
      if (std::find(seed.begin(), seed.end(), q) != seed.end()) continue;
      insert(q);
    }
  }

  Triangulation result() const {
    Triangulation t;
    t.dimension = 3;
    t.cell_size = 4;
    std::vector<std::uint32_t> finite;
    for (std::uint32_t c = 0; c < cells_.size(); ++c) {
      if (alive_[c] && !is_infinite(c)) finite.push_back(c);
    }
    auto sorted_vertices = [&](std::uint32_t c) {
      auto v = cells_[c].v;
      std::sort(v.begin(), v.end());
      return v;
    };
    std::sort(finite.begin(), finite.end(),
              [&](std::uint32_t a, std::uint32_t b) { return sorted_vertices(a) < sorted_vertices(b); });
    std::vector<std::uint32_t> out_index(cells_.size(), Triangulation::kOutside);
    for (std::uint32_t i = 0; i < finite.size(); ++i) out_index[finite[i]] = i;
    for (std::uint32_t c : finite) {
      const auto sv = sorted_vertices(c);
      std::array<std::uint32_t, 4> nb{};
      for (int k = 0; k < 4; ++k) {
        const auto pos = std::find(cells_[c].v.begin(), cells_[c].v.end(), sv[static_cast<std::size_t>(k)]) -
                         cells_[c].v.begin();
        nb[static_cast<std::size_t>(k)] = out_index[cells_[c].nb[static_cast<std::size_t>(pos)]];
      }
      t.cells.push_back(sv);
      t.neighbors.push_back(nb);
    }
    return t;
  }

 private:
  bool is_infinite(std::uint32_t c) const {
    const auto& v = cells_[c].v;
    return v[0] == kInf || v[1] == kInf || v[2] == kInf || v[3] == kInf;
  }

  int infinite_slot(std::uint32_t c) const {
    for (int k = 0; k < 4; ++k)
      if (cells_[c].v[static_cast<std::size_t>(k)] == kInf) return k;
    return -1;
  }

  Vec3 at(std::uint32_t v, std::uint32_t q) const { return v == kInf ? p_[q] : p_[v]; }

  bool finite_conflict(std::uint32_t c, std::uint32_t q) const {
    const auto& v = cells_[c].v;
    return in_sphere(p_[v[0]], p_[v[1]], p_[v[2]], p_[v[3]], p_[q]) > 0;
  }

  bool in_conflict(std::uint32_t c, std::uint32_t q) const {
    const int s = infinite_slot(c);
    if (s < 0) return finite_conflict(c, q);
    const auto& v = cells_[c].v;
    // The point stands in for the vertex at infinity.
    const int o = orient3d(at(v[0], q), at(v[1], q), at(v[2], q), at(v[3], q));
    if (o != 0) return o > 0;
    return finite_conflict(cells_[c].nb[static_cast<std::size_t>(s)], q);
  }

  std::uint32_t new_cell(const Cell& cell) {
    if (!free_.empty()) {
      const std::uint32_t c = free_.back();
      free_.pop_back();
      cells_[c] = cell;
      alive_[c] = 1;
      return c;
    }
    cells_.push_back(cell);
    alive_.push_back(1);
    mark_.push_back(0);
    seen_.push_back(0);
    return static_cast<std::uint32_t>(cells_.size() - 1);
  }

  // Links faces (those still unlinked) of the given cells to each other.
  void link_new(const std::vector<std::uint32_t>& fresh) {
    struct Face {
      std::array<std::uint32_t, 3> key;
      std::uint32_t cell;
      int slot;
      bool operator<(const Face& o) const { return key < o.key; }
    };
    std::vector<Face> faces;
    for (std::uint32_t c : fresh) {
      for (int k = 0; k < 4; ++k) {
        if (cells_[c].nb[static_cast<std::size_t>(k)] != kNone) continue;
        std::array<std::uint32_t, 3> key{};
        int j = 0;
        for (int m = 0; m < 4; ++m)
          if (m != k) key[static_cast<std::size_t>(j++)] = cells_[c].v[static_cast<std::size_t>(m)];
        std::sort(key.begin(), key.end());
        faces.push_back({key, c, k});
      }
    }
    std::sort(faces.begin(), faces.end());
    for (std::size_t i = 0; i + 1 < faces.size(); i += 2) {
      if (faces[i].key != faces[i + 1].key) throw Error(Errc::InvalidArgument, "triangulation lost a face pairing");
      cells_[faces[i].cell].nb[static_cast<std::size_t>(faces[i].slot)] = faces[i + 1].cell;
      cells_[faces[i + 1].cell].nb[static_cast<std::size_t>(faces[i + 1].slot)] = faces[i].cell;
    }
    if (faces.size() % 2 != 0) throw Error(Errc::InvalidArgument, "triangulation lost a face pairing");
  }

  std::array<std::uint32_t, 4> initial_tetrahedron(const std::vector<std::uint32_t>& order) {
    const std::uint32_t a = order[0];
    std::size_t i = 1;
    while (i < order.size() && p_[order[i]] == p_[a]) ++i;
    if (i == order.size()) throw Error(Errc::InvalidArgument, "all points coincide");
    const std::uint32_t b = order[i];
    std::uint32_t c = kNone, d = kNone;
    for (std::size_t j = 1; j < order.size() && c == kNone; ++j) {
      const Vec3 pc = p_[order[j]];
      for (int k = 0; k < 3; ++k) {
        Vec3 probe = p_[a];
        probe[k] += 1.0;
        if (orient3d(p_[a], p_[b], pc, probe) != 0) {
          c = order[j];
          break;
        }
      }
    }
    if (c == kNone) throw Error(Errc::InvalidArgument, "points are collinear");
    for (std::size_t j = 1; j < order.size(); ++j) {
      if (orient3d(p_[a], p_[b], p_[c], p_[order[j]]) != 0) {
        d = order[j];
        break;
      }
    }
    if (d == kNone) throw Error(Errc::InvalidArgument, "points are coplanar");
    std::array<std::uint32_t, 4> v{a, b, c, d};
    if (orient3d(p_[a], p_[b], p_[c], p_[d]) < 0) std::swap(v[2], v[3]);

    std::vector<std::uint32_t> fresh;
    const std::uint32_t root = new_cell({v, {kNone, kNone, kNone, kNone}});
    fresh.push_back(root);
    for (int k = 0; k < 4; ++k) {
      // Swapping two finite vertices flips orientation so the hull face is
      // seen from outside.
      std::array<std::uint32_t, 4> w = v;
      w[static_cast<std::size_t>(k)] = kInf;
      const int s0 = (k + 1) % 4, s1 = (k + 2) % 4;
      std::swap(w[static_cast<std::size_t>(s0)], w[static_cast<std::size_t>(s1)]);
      Cell cell{w, {kNone, kNone, kNone, kNone}};
      cell.nb[static_cast<std::size_t>(k)] = root;
      const std::uint32_t id = new_cell(cell);
      cells_[root].nb[static_cast<std::size_t>(k)] = id;
      fresh.push_back(id);
    }
    link_new(fresh);
    hint_ = root;
    return v;
  }

  std::uint64_t next_random() { return splitmix64(rng_); }

  std::uint32_t locate(std::uint32_t q) {
    std::uint32_t c = hint_;
    for (std::size_t steps = 0;; ++steps) {
      if (steps > 4 * cells_.size() + 64) throw Error(Errc::InvalidArgument, "point location did not terminate");
      const int s = infinite_slot(c);
      if (s >= 0) {
        if (in_conflict(c, q)) return c;
        c = cells_[c].nb[static_cast<std::size_t>(s)];
        continue;
      }
      const auto& v = cells_[c].v;
      const int start = static_cast<int>(next_random() & 3u);
      bool moved = false;
      for (int m = 0; m < 4 && !moved; ++m) {
        const int k = (start + m) % 4;
        Vec3 w[4] = {p_[v[0]], p_[v[1]], p_[v[2]], p_[v[3]]};
        w[k] = p_[q];
        if (orient3d(w[0], w[1], w[2], w[3]) < 0) {
          c = cells_[c].nb[static_cast<std::size_t>(k)];
          moved = true;
        }
      }
      if (!moved) return c;
    }
  }

  void insert(std::uint32_t q) {
    const std::uint32_t start = locate(q);
    if (!in_conflict(start, q)) throw Error(Errc::InvalidArgument, "duplicate point after perturbation");
    ++stamp_;
    std::vector<std::uint32_t> cavity{start}, stack{start};
    std::vector<std::pair<std::uint32_t, int>> boundary;
    mark_[start] = stamp_;
    while (!stack.empty()) {
      const std::uint32_t c = stack.back();
      stack.pop_back();
      for (int k = 0; k < 4; ++k) {
        const std::uint32_t n = cells_[c].nb[static_cast<std::size_t>(k)];
        if (mark_[n] == stamp_) continue;
        if (seen_[n] != stamp_ && in_conflict(n, q)) {
          mark_[n] = stamp_;
          cavity.push_back(n);
          stack.push_back(n);
        } else {
          seen_[n] = stamp_;
          boundary.emplace_back(c, k);
        }
      }
    }
    // Outside slots are resolved before any cavity id is recycled.
    struct Pending {
      Cell cell;
      std::uint32_t outside;
      int outside_slot;
    };
    std::vector<Pending> pending;
    pending.reserve(boundary.size());
    for (const auto& [c, k] : boundary) {
      Pending pd{cells_[c], cells_[c].nb[static_cast<std::size_t>(k)], -1};
      for (int j = 0; j < 4; ++j)
        if (cells_[pd.outside].nb[static_cast<std::size_t>(j)] == c) pd.outside_slot = j;
      pd.cell.v[static_cast<std::size_t>(k)] = q;
      pd.cell.nb = {kNone, kNone, kNone, kNone};
      pd.cell.nb[static_cast<std::size_t>(k)] = pd.outside;
      pending.push_back(pd);
    }
    for (std::uint32_t c : cavity) {
      alive_[c] = 0;
      free_.push_back(c);
    }
    std::vector<std::uint32_t> fresh;
    fresh.reserve(pending.size());
    for (const Pending& pd : pending) {
      const std::uint32_t id = new_cell(pd.cell);
      cells_[pd.outside].nb[static_cast<std::size_t>(pd.outside_slot)] = id;
      fresh.push_back(id);
    }
    link_new(fresh);
    hint_ = fresh.back();
  }

  std::span<const Vec3> p_;
  std::vector<Cell> cells_;
  std::vector<std::uint8_t> alive_;
  std::vector<std::uint32_t> mark_, seen_, free_;
  std::uint32_t stamp_ = 0;
  std::uint32_t hint_ = 0;
  std::uint64_t rng_ = 0x5eed;
};

}  // namespace

Vec3 jitter_offset(std::size_t index, const Mat3& frame) {
  std::uint64_t state = static_cast<std::uint64_t>(index) * 0x2545f4914f6cdd1dull + 1;
  const double u = unit_symmetric(splitmix64(state));
  const double v = unit_symmetric(splitmix64(state));
  const double w = unit_symmetric(splitmix64(state));
  return kJitterMagnitude * (u * frame[0] + v * frame[1] + w * frame[2]);
}

Triangulation delaunay3d(std::span<const Vec3> points, const Mat3& jitter_frame) {
  Triangulation t;
  const std::size_t n = points.size();
  if (n == 0) throw Error(Errc::InvalidArgument, "triangulation needs at least one point");
  if (n < 4) {
    t.dimension = static_cast<int>(n) - 1;
    t.cell_size = n;
    std::array<std::uint32_t, 4> cell{kNone, kNone, kNone, kNone};
    for (std::uint32_t i = 0; i < n; ++i) cell[i] = i;
    t.cells.push_back(cell);
    return t;
  }
  std::vector<Vec3> jittered(points.begin(), points.end());
  for (std::size_t i = 0; i < n; ++i) jittered[i] = jittered[i] + jitter_offset(i, jitter_frame);
  Builder builder(jittered);
  builder.run();
  return builder.result();
}

}  // namespace itt
