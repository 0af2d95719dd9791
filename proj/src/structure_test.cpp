#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "itt/error.hpp"
#include "itt/structure.hpp"
#include "parser_fixtures.hpp"

using namespace itt;

namespace {

Structure cubic(double a, std::vector<std::pair<int, Vec3>> sites) {
  Structure s;
  s.lattice = Lattice::from_parameters(a, a, a, 90, 90, 90);
  for (const auto& [z, f] : sites) s.sites.push_back(make_site(s.lattice, z, f));
  s.source_id = "toy";
  return s;
}

Structure rocksalt() {
  Structure s;
  s.lattice = Lattice::from_parameters(5.64, 5.64, 5.64, 90, 90, 90);
  for (Vec3 t : {Vec3{0, 0, 0}, Vec3{0, 0.5, 0.5}, Vec3{0.5, 0, 0.5}, Vec3{0.5, 0.5, 0}}) {
    s.sites.push_back(make_site(s.lattice, 11, t));
    s.sites.push_back(make_site(s.lattice, 17, t + Vec3{0.5, 0, 0}));
  }
  return s;
}

}  // namespace

TEST_CASE("parser fixtures") {
  for (const auto& c : fixtures::parser_cases()) {
    CAPTURE(c.file);
    CHECK(fixtures::check_parser_case(ITT_FIXTURE_DIR, c) == "");
  }
}

TEST_CASE("parser fixture details") {
  const auto p1 = read_structure_file(std::filesystem::path(ITT_FIXTURE_DIR) / "p1_carbon.cif");
  CHECK(p1.lattice.volume() == doctest::Approx(1000.0));
  CHECK(p1.source_id == "p1_carbon");

  Warnings w;
  (void)read_structure_file(std::filesystem::path(ITT_FIXTURE_DIR) / "labels_only.cif", &w);
  CHECK(std::any_of(w.begin(), w.end(), [](const std::string& m) { return m.find("occupancy") != std::string::npos; }));

  const auto hex = read_structure_file(std::filesystem::path(ITT_FIXTURE_DIR) / "hexagonal.cif");
  CHECK(hex.sites[0].cart.x == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(hex.sites[0].cart.y == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
  CHECK(hex.sites[0].cart.z == doctest::Approx(2.5));
  CHECK(hex.lattice.angles()[2] == doctest::Approx(120.0));
}

TEST_CASE("inline parse errors") {
  CHECK_THROWS_AS(parse_cif("data_x\n_cell_length_a 1\n"), Error);
  CHECK_THROWS_AS(parse_xyz("1\n"), Error);
  try {
    (void)parse_xyz("1\nLattice=\"10 0 0 0 10 0 0 0 10\"\nXx 0 0 0\n");
    FAIL("expected UnknownElement");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownElement);
  }
}

TEST_CASE("cif and xyz round trips") {
  for (const char* file : {"rocksalt_fcc.cif", "hexagonal.cif", "esd_numbers.cif", "wrapped.xyz"}) {
    CAPTURE(file);
    const auto s = read_structure_file(std::filesystem::path(ITT_FIXTURE_DIR) / file);
    for (const auto& again : {parse_cif(write_cif(s)), parse_xyz(write_xyz(s))}) {
      REQUIRE(again.sites.size() == s.sites.size());
      for (std::size_t i = 0; i < s.sites.size(); ++i) {
        CHECK(again.sites[i].z == s.sites[i].z);
        CHECK(distance(again.sites[i].cart, s.sites[i].cart) < 1e-9);
      }
    }
  }
}

TEST_CASE("supercell replication") {
  CHECK(supercell_repeats(Lattice::from_parameters(16, 16, 16, 90, 90, 90), 64) == std::array<int, 3>{4, 4, 4});
  CHECK(supercell_repeats(Lattice::from_parameters(64, 64, 64, 90, 90, 90), 64) == std::array<int, 3>{1, 1, 1});
  CHECK(supercell_repeats(Lattice::from_parameters(30, 30, 30, 90, 90, 90), 64) == std::array<int, 3>{2, 2, 2});
  CHECK(supercell_repeats(Lattice::from_parameters(25.6, 200, 42.6666, 90, 90, 90), 64) ==
        std::array<int, 3>{3, 1, 2});  // 2.5 rounds up

  const auto big = build_supercell(cubic(16, {{6, {0, 0, 0}}}), 64);
  CHECK(big.sites.size() == 64);
  CHECK(big.lattice.lengths()[0] == doctest::Approx(64.0));

  const auto salt = build_supercell(rocksalt(), 20);
  std::size_t na = 0;
  for (const auto& site : salt.sites) na += site.z == 11;
  CHECK(salt.sites.size() == 8 * 64);  // round(20 / 5.64) = 4
  CHECK(na * 2 == salt.sites.size());

  try {
    (void)build_supercell(cubic(1, {{6, {0, 0, 0}}}), 64, 1000);
    FAIL("expected TooManyAtoms");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooManyAtoms);
  }
}

TEST_CASE("neighbor lists") {
  const auto two = cubic(50, {{6, {0, 0, 0}}, {6, {3.0 / 50, 0, 0}}});
  const auto pairs = neighbor_list(two, 8.0);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].distance == doctest::Approx(3.0));

  const auto self = neighbor_list(cubic(5, {{6, {0, 0, 0}}}), 8.0);
  REQUIRE(self.size() == 1);
  CHECK(self[0].i == 0);
  CHECK(self[0].j == 0);
  CHECK(self[0].distance == doctest::Approx(5.0));

  const auto far = cubic(50, {{6, {0, 0, 0}}, {6, {9.0 / 50, 0, 0}}});
  CHECK(neighbor_list(far, 8.0, false).empty());
  CHECK(min_image_distance(far.lattice, far.sites[0].frac, far.sites[1].frac) == doctest::Approx(9.0));
}

TEST_CASE("neighbor list is invariant under relabeling") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Structure s;
  s.lattice = Lattice::from_parameters(9, 10, 11, 80, 95, 105);
  for (int i = 0; i < 20; ++i) s.sites.push_back(make_site(s.lattice, 6, {u(rng), u(rng), u(rng)}));
  std::vector<std::uint32_t> perm(s.sites.size());
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), rng);
  Structure t = s;
  for (std::size_t i = 0; i < perm.size(); ++i) t.sites[perm[i]] = s.sites[i];
  auto canon = [](std::vector<NeighborPair> v, const std::vector<std::uint32_t>* p) {
    std::multiset<std::tuple<std::uint32_t, std::uint32_t, long long>> out;
    for (const auto& q : v) {
      std::uint32_t i = p ? (*p)[q.i] : q.i, j = p ? (*p)[q.j] : q.j;
      out.insert({std::min(i, j), std::max(i, j), std::llround(q.distance * 1e6)});
    }
    return out;
  };
  CHECK(canon(neighbor_list(s, 6.0), &perm) == canon(neighbor_list(t, 6.0), nullptr));
}

TEST_CASE("unique atoms") {
  const auto& clusters = default_clusters();
  const auto salt = unique_atoms(rocksalt(), clusters);
  REQUIRE(salt.nodes.size() == 2);
  std::uint32_t total = 0;
  for (const auto& n : salt.nodes) total += n.multiplicity;
  CHECK(total == 8);
  CHECK(!salt.truncated);
  for (const auto& e : salt.edges) CHECK(e.distance <= 8.0);

  const auto single = unique_atoms(cubic(20, {{6, {0, 0, 0}}}), clusters);
  CHECK(single.nodes.size() == 1);
  CHECK(single.edges.empty());

  // 300 inequivalent sites along a distorted chain in a big cell.
  Structure chain;
  chain.lattice = Lattice::from_parameters(400, 400, 400, 90, 90, 90);
  for (int i = 0; i < 300; ++i)
    chain.sites.push_back(make_site(chain.lattice, 6, {i * (1.0 + 1e-3 * i) / 400.0, 0.0, 0.0}));
  const auto capped = unique_atoms(chain, clusters);
  CHECK(capped.nodes.size() == 256);
  CHECK(capped.truncated);
  CHECK(capped.unique_count == 300);
}

TEST_CASE("unique atoms ignore site order") {
  auto s = rocksalt();
  auto t = s;
  std::reverse(t.sites.begin(), t.sites.end());
  const auto a = unique_atoms(s, default_clusters());
  const auto b = unique_atoms(t, default_clusters());
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].key_hash == b.nodes[i].key_hash);
    CHECK(a.nodes[i].multiplicity == b.nodes[i].multiplicity);
  }
}

TEST_CASE("rigid motion keeps fractional coordinates") {
  const auto s = rocksalt();
  const double c = std::cos(0.3), sn = std::sin(0.3);
  const Mat3 r{{Vec3{c, -sn, 0}, Vec3{sn, c, 0}, Vec3{0, 0, 1}}};
  const auto m = rigidly_moved(s, r, {1, 2, 3});
  for (std::size_t i = 0; i < s.sites.size(); ++i) {
    CHECK(m.sites[i].frac == s.sites[i].frac);
    CHECK(distance(m.sites[i].cart, r * s.sites[i].cart + Vec3{1, 2, 3}) < 1e-9);
  }
}
