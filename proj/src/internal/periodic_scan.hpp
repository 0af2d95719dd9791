#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "itt/simd.hpp"
#include "itt/structure.hpp"

namespace itt {

namespace detail {

// Calls visit(i, j, squared_distance) for every site j and periodic image of
// it within the cutoff of site i (j >= i when upper_only). The zero image of
// a site against itself is skipped.
template <class Visit>
void scan_images(const Structure& s, double cutoff, bool periodic, bool upper_only, Visit&& visit) {
  const std::size_t n = s.sites.size();
  std::vector<Vec3> cart(n);
  for (std::size_t i = 0; i < n; ++i) cart[i] = s.sites[i].cart;
  const simd::PointsSoA soa(cart);
  const double cutoff2 = cutoff * cutoff;
  std::vector<double> d2(n);

  std::vector<Vec3> shifts;
  if (periodic) {
    const auto h = s.lattice.heights();
    std::array<int, 3> r{};
    for (std::size_t k = 0; k < 3; ++k) r[k] = static_cast<int>(std::ceil(cutoff / h[k])) + 1;
    for (int a = -r[0]; a <= r[0]; ++a)
      for (int b = -r[1]; b <= r[1]; ++b)
        for (int c = -r[2]; c <= r[2]; ++c)
          shifts.push_back(row_times(Vec3{static_cast<double>(a), static_cast<double>(b), static_cast<double>(c)},
                                     s.lattice.vectors));
  } else {
    shifts.push_back(Vec3{});
  }
  const std::size_t zero_shift = periodic ? shifts.size() / 2 : 0;

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j0 = upper_only ? i : 0;
    const std::size_t count = n - j0;
    for (std::size_t t = 0; t < shifts.size(); ++t) {
      // Image of site i shifted by -t is equivalent to site j shifted by +t.
      const Vec3 probe = cart[i] - shifts[t];
      simd::kernels().squared_distances(probe, soa.x.data() + j0, soa.y.data() + j0, soa.z.data() + j0,
                                        count, d2.data());
      for (std::size_t k = 0; k < count; ++k) {
        if (d2[k] <= cutoff2) {
          const std::size_t j = j0 + k;
          if (j == i && t == zero_shift) continue;
          visit(i, j, d2[k]);
        }
      }
    }
  }
}

}  // namespace detail

}  // namespace itt
