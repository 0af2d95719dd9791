#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "itt/structure.hpp"

namespace itt {

// Keeps sites that are at least `tol` away (minimum image) from every site
// kept before them. Fractional space is binned so each check is local.
class SiteDeduplicator {
 public:
  SiteDeduplicator(const Lattice& lattice, double tol) : lattice_(lattice), tol_(tol) {
    const auto h = lattice.heights();
    for (std::size_t k = 0; k < 3; ++k) {
      bins_[k] = std::clamp(static_cast<int>(std::floor(h[k] / tol)), 1, 256);
    }
  }

  // Returns true and records the site when it is not a duplicate.
  bool insert(std::vector<Site>& sites, const Site& site) {
    const auto b = bin_of(site.frac);
    for (int da = -1; da <= 1; ++da) {
      for (int db = -1; db <= 1; ++db) {
        for (int dc = -1; dc <= 1; ++dc) {
          const auto it = grid_.find(key({b[0] + da, b[1] + db, b[2] + dc}));
          if (it == grid_.end()) continue;
          for (std::size_t idx : it->second) {
            if (close(sites[idx].frac, site.frac)) return false;
          }
        }
      }
    }
    grid_[key(b)].push_back(sites.size());
    sites.push_back(site);
    return true;
  }

 private:
  std::array<int, 3> bin_of(Vec3 f) const {
    std::array<int, 3> b{};
    for (int k = 0; k < 3; ++k) {
      b[static_cast<std::size_t>(k)] = std::min(static_cast<int>(f[k] * bins_[static_cast<std::size_t>(k)]),
                                                bins_[static_cast<std::size_t>(k)] - 1);
    }
    return b;
  }

  std::uint64_t key(std::array<int, 3> b) const {
    std::uint64_t out = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      const int m = ((b[k] % bins_[k]) + bins_[k]) % bins_[k];
      out = out * 1024u + static_cast<std::uint64_t>(m);
    }
    return out;
  }

  bool close(Vec3 a, Vec3 b) const {
    Vec3 d = b - a;
    for (int k = 0; k < 3; ++k) d[k] -= std::floor(d[k] + 0.5);
    return norm(row_times(d, lattice_.vectors)) < tol_;
  }

  const Lattice& lattice_;
  double tol_;
  std::array<int, 3> bins_{};
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid_;
};

}  // namespace itt
