#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "itt/error.hpp"
#include "itt/interaction.hpp"

using namespace itt;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Vec3> cloud(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(0.0, scale);
  std::vector<Vec3> p(n);
  for (auto& x : p) x = {u(rng), u(rng), u(rng)};
  return p;
}

// Multiset of chain elements over GF(2): entries with odd multiplicity.
std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> reduce_mod2(
    const std::vector<InteractionSimplex>& chain) {
  std::map<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>, int> count;
  for (const auto& s : chain) ++count[{s.left.vertices, s.right.vertices}];
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> odd;
  for (const auto& [k, c] : count)
    if (c % 2) odd.push_back(k);
  return odd;
}

const InteractionSimplex* find(const InteractionFiltration& f, std::vector<std::uint32_t> l,
                               std::vector<std::uint32_t> r) {
  for (const auto& s : f.simplices)
    if (s.left.vertices == l && s.right.vertices == r) return &s;
  return nullptr;
}

}  // namespace

TEST_CASE("mode names") {
  CHECK(parse_mode("centered") == InteractionMode::centered);
  CHECK(parse_mode("symmetric") == InteractionMode::symmetric);
  CHECK(mode_name(InteractionMode::symmetric) == "symmetric");
  CHECK_THROWS_AS(parse_mode("both"), Error);
}

TEST_CASE("interaction filtration values") {
  const std::vector<Vec3> c{{0, 0, 0}};
  const auto one = interaction_filtration(c, std::vector<Vec3>{{1, 0, 0}});
  REQUIRE(one.simplices.size() == 1);
  CHECK(one.simplices[0].value == doctest::Approx(0.5));

  const auto two = interaction_filtration(c, std::vector<Vec3>{{1, 0, 0}, {-1, 0, 0}});
  REQUIRE(two.simplices.size() == 3);
  CHECK(find(two, {0}, {0})->value == doctest::Approx(0.5));
  CHECK(find(two, {0}, {1})->value == doctest::Approx(0.5));
  CHECK(find(two, {0}, {0, 1})->value == doctest::Approx(1.0));

  const auto sym = interaction_filtration(c, std::vector<Vec3>{{1, 0, 0}}, InteractionMode::symmetric);
  CHECK(sym.simplices == one.simplices);

  CHECK_THROWS_AS(interaction_filtration({}, c), Error);
  CHECK_THROWS_AS(interaction_filtration(c, {}), Error);
}

TEST_CASE("componentwise boundary") {
  const std::vector<Vec3> c{{0, 0, 0}, {0, 0, 0.4}};
  const std::vector<Vec3> p{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}};
  const auto f = interaction_filtration(c, p, InteractionMode::symmetric);
  const auto* ve = find(f, {0}, {0, 1});
  REQUIRE(ve);
  const auto d1 = reduce_mod2(interaction_boundary(f, *ve));
  REQUIRE(d1.size() == 2);
  CHECK(d1[0].first == std::vector<std::uint32_t>{0});
  CHECK(d1[0].second == std::vector<std::uint32_t>{0});
  CHECK(d1[1].second == std::vector<std::uint32_t>{1});

  const auto* ew = find(f, {0, 1}, {2});
  REQUIRE(ew);
  const auto d2 = reduce_mod2(interaction_boundary(f, *ew));
  REQUIRE(d2.size() == 2);
  CHECK(d2[0].first == std::vector<std::uint32_t>{0});
  CHECK(d2[1].first == std::vector<std::uint32_t>{1});

  const auto* vt = find(f, {0}, {0, 1, 2});
  REQUIRE(vt);
  std::vector<InteractionSimplex> twice;
  for (const auto& face : interaction_boundary(f, *vt)) {
    const auto dd = interaction_boundary(f, face);
    twice.insert(twice.end(), dd.begin(), dd.end());
  }
  CHECK(reduce_mod2(twice).empty());
}

TEST_CASE("boundary of boundary vanishes on random filtrations") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mode = trial % 2 ? InteractionMode::symmetric : InteractionMode::centered;
    const auto f = interaction_filtration(cloud(rng, 2 + trial % 5), cloud(rng, 3 + trial % 6), mode);
    for (const auto& s : f.simplices) {
      std::vector<InteractionSimplex> twice;
      for (const auto& face : interaction_boundary(f, s)) {
        CHECK(face.value <= s.value);
        const auto dd = interaction_boundary(f, face);
        twice.insert(twice.end(), dd.begin(), dd.end());
      }
      CHECK(reduce_mod2(twice).empty());
    }
  }
}

TEST_CASE("pih examples") {
  const std::vector<Vec3> c{{0, 0, 0}};
  const auto two = pih(interaction_filtration(c, std::vector<Vec3>{{1, 0, 0}, {-1, 0, 0}}));
  REQUIRE(two.bars.size() == 2);
  CHECK(two.bars[0].birth == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(two.bars[0].death == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(two.bars[1].birth == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::isinf(two.bars[1].death));

  const double h = std::sqrt(3.0) / 2;
  const std::vector<Vec3> tri{{0, 0, 0}, {1, 0, 0}, {0.5, h, 0}};
  const std::vector<Vec3> above{{0.5, h / 3, 0.3}};
  const auto loop = pih(interaction_filtration(above, tri));
  REQUIRE(loop.count(1) == 1);
  CHECK(loop.bars.back().birth == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(loop.bars.back().death == doctest::Approx(0.5773503).epsilon(1e-6));

  const auto single = pih(interaction_filtration(c, std::vector<Vec3>{{0, 3, 0}}));
  REQUIRE(single.bars.size() == 1);
  CHECK(single.bars[0] == Bar{0, 1.5, kInf});
}

TEST_CASE("interaction curves agree across fast path, reduction and dense oracle") {
  std::mt19937_64 rng(23);
  const GridSpec grid{0.0, 0.02, 60};
  for (int trial = 0; trial < 40; ++trial) {
    const auto mode = trial % 2 ? InteractionMode::symmetric : InteractionMode::centered;
    const auto center = cloud(rng, 1 + trial % 6);
    const auto partner = cloud(rng, 1 + (trial * 5) % 8);
    const auto f = interaction_filtration(center, partner, mode);
    const auto reduced = betti_curve(pih(f), grid, 1);
    const auto dense = brute_force_betti_curve(interaction_boundary_matrix(f), grid, 1);
    CHECK(reduced.values == dense.values);
    const auto fast = interaction_betti_curves(center, partner, mode, grid);
    CHECK(fast.values == reduced.values);
    const auto bars = betti_curve(interaction_barcode(center, partner, mode), grid, 1);
    CHECK(bars.values == reduced.values);
  }
}

TEST_CASE("centered fast path on a larger partner cloud with voids") {
  // A hollow shell of partner points around each center exercises the void
  // counting in the fast path.
  std::vector<Vec3> shell;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j)
      for (int k = -2; k <= 2; ++k)
        if (std::max({std::abs(i), std::abs(j), std::abs(k)}) == 2) shell.push_back({double(i), double(j), double(k)});
  const std::vector<Vec3> center{{0.1, 0.05, 0.02}, {5, 5, 5}};
  const GridSpec grid{0.0, 0.1, 60};
  const auto f = interaction_filtration(center, shell);
  const auto reduced = betti_curve(pih(f), grid, 1);
  const auto fast = interaction_betti_curves(center, shell, InteractionMode::centered, grid);
  CHECK(fast.values == reduced.values);
}
