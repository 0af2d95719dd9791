#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "itt/error.hpp"
#include "itt/structure.hpp"
#include "internal/periodic_scan.hpp"

namespace itt {
namespace {

// FNV-1a over the key integers; stable across platforms and runs.
std::uint64_t hash_key(const std::vector<std::int64_t>& key) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::int64_t v : key) {
    auto u = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (u & 0xffu);
      h *= 0x100000001b3ull;
      u >>= 8;
    }
  }
  return h;
}

bool frac_less(Vec3 a, Vec3 b) { return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z); }

}  // namespace

AtomicGraph unique_atoms(const Structure& s, const ClusterAssignment& clusters, double cutoff, double round_tol,
                         std::size_t cap) {
  if (!(cutoff > 0.0) || !(round_tol > 0.0)) throw Error(Errc::InvalidArgument, "cutoff and tolerance must be positive");
  const std::size_t n = s.sites.size();

  // Environment per site: (neighbor Z, rounded distance) over every periodic image.
  std::vector<std::vector<std::pair<int, std::int64_t>>> env(n);
  detail::scan_images(s, cutoff, /*periodic=*/true, /*upper_only=*/false, [&](std::size_t i, std::size_t j, double d2) {
    env[i].emplace_back(s.sites[j].z, std::llround(std::sqrt(d2) / round_tol));
  });

  struct Class {
    std::vector<std::int64_t> key;
    std::size_t representative;
    std::uint32_t multiplicity = 0;
  };
  std::map<std::vector<std::int64_t>, std::size_t> index;
  std::vector<Class> classes;
  for (std::size_t i = 0; i < n; ++i) {
    auto& e = env[i];
    std::sort(e.begin(), e.end());
    std::vector<std::int64_t> key;
    key.reserve(2 + 2 * e.size());
    key.push_back(s.sites[i].z);
    key.push_back(static_cast<std::int64_t>(e.size()));
    for (const auto& [z, q] : e) {
      key.push_back(z);
      key.push_back(q);
    }
    auto [it, inserted] = index.try_emplace(key, classes.size());
    if (inserted) classes.push_back(Class{std::move(key), i, 0});
    Class& c = classes[it->second];
    ++c.multiplicity;
    if (frac_less(s.sites[i].frac, s.sites[c.representative].frac)) c.representative = i;
  }

  struct Ranked {
    int cluster;
    int z;
    std::uint64_t hash;
    const Class* cls;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(classes.size());
  for (const Class& c : classes) {
    const int z = s.sites[c.representative].z;
    ranked.push_back({clusters[z], z, hash_key(c.key), &c});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.cluster != b.cluster) return a.cluster < b.cluster;
    if (a.z != b.z) return a.z < b.z;
    if (a.hash != b.hash) return a.hash < b.hash;
    return a.cls->key < b.cls->key;
  });

  AtomicGraph g;
  g.cutoff = cutoff;
  g.unique_count = ranked.size();
  g.truncated = ranked.size() > cap;
  if (g.truncated) ranked.resize(cap);
  for (const Ranked& r : ranked) {
    const Site& rep = s.sites[r.cls->representative];
    g.nodes.push_back({r.z, r.cluster, rep.cart, r.cls->multiplicity, r.hash});
  }
  for (std::size_t a = 0; a < ranked.size(); ++a) {
    for (std::size_t b = a + 1; b < ranked.size(); ++b) {
      const double d = quantize(min_image_distance(s.lattice, s.sites[ranked[a].cls->representative].frac,
                                                   s.sites[ranked[b].cls->representative].frac));
      if (d <= cutoff) g.edges.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), d});
    }
  }
  return g;
}

}  // namespace itt
