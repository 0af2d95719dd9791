#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "itt/error.hpp"
#include "itt/filtration.hpp"

using namespace itt;

namespace {

std::vector<Vec3> regular_tetrahedron() { return {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}; }

std::vector<Vec3> equilateral() { return {{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0}}; }

std::vector<Vec3> random_cloud(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec3> p(n);
  for (auto& x : p) x = {u(rng), u(rng), u(rng)};
  return p;
}

double tet_volume(const std::vector<Vec3>& p, const std::array<std::uint32_t, 4>& c) {
  return std::abs(dot(p[c[1]] - p[c[0]], cross(p[c[2]] - p[c[0]], p[c[3]] - p[c[0]]))) / 6.0;
}

const Simplex* find(const Filtration& f, std::vector<std::uint32_t> v) {
  for (const auto& s : f.simplices)
    if (s.vertices == v) return &s;
  return nullptr;
}

std::vector<Vec3> jittered(std::vector<Vec3> p) {
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = p[i] + jitter_offset(i, Mat3::identity());
  return p;
}

// The triangulation is Delaunay for the jittered cloud. Cells come back with
// sorted vertices, so orient each one before the exact empty-sphere test.
void check_delaunay(const std::vector<Vec3>& original, const Triangulation& t) {
  const auto p = jittered(original);
  for (std::size_t k = 0; k < t.cells.size(); ++k) {
    auto c = t.cells[k];
    if (orient3d(p[c[0]], p[c[1]], p[c[2]], p[c[3]]) < 0) std::swap(c[0], c[1]);
    REQUIRE(orient3d(p[c[0]], p[c[1]], p[c[2]], p[c[3]]) > 0);
    for (std::uint32_t q = 0; q < p.size(); ++q) {
      if (std::find(c.begin(), c.end(), q) != c.end()) continue;
      CHECK(in_sphere(p[c[0]], p[c[1]], p[c[2]], p[c[3]], p[q]) <= 0);
    }
    for (std::size_t i = 0; i < 4; ++i) {
      const std::uint32_t nb = t.neighbors[k][i];
      if (nb == Triangulation::kOutside) continue;
      const auto& o = t.neighbors[nb];
      CHECK(std::count(o.begin(), o.end(), static_cast<std::uint32_t>(k)) == 1);
    }
  }
}

}  // namespace

TEST_CASE("orientation and in-sphere signs") {
  const Vec3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0};
  CHECK(orient3d(a, b, c, {0, 0, 1}) == 1);
  CHECK(orient3d(a, b, c, {0, 0, -1}) == -1);
  CHECK(orient3d(a, b, c, {0.3, 0.3, 0}) == 0);
  const Vec3 d{0, 0, 1};
  CHECK(in_sphere(a, b, c, d, {0.25, 0.25, 0.25}) == 1);
  CHECK(in_sphere(a, b, c, d, {5, 5, 5}) == -1);
  CHECK(in_sphere(a, b, c, d, {1, 1, 0}) == 0);  // cospherical corner of the unit cube
}

TEST_CASE("near-degenerate predicates fall back to exact arithmetic") {
  const Vec3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0};
  CHECK(orient3d(a, b, c, {0.5, 0.5, 1e-300}) == 1);
  CHECK(orient3d(a, b, c, {0.5, 0.5, -1e-300}) == -1);
  // Points offset by one ulp from the plane through three lattice points.
  const Vec3 e{0.1, 0.2, 0.3};
  const Vec3 f{0.7, 0.1, 0.3};
  const Vec3 g{0.4, 0.9, 0.3};
  CHECK(orient3d(e, f, g, {0.3, 0.3, 0.3}) == 0);
  CHECK(orient3d(e, f, g, {0.3, 0.3, std::nextafter(0.3, 1.0)}) != 0);
}

TEST_CASE("delaunay3d small cases") {
  const auto tet = regular_tetrahedron();
  CHECK(delaunay3d(tet).cells.size() == 1);

  auto five = tet;
  five.push_back({0.1, 0.05, 0.02});
  const auto t5 = delaunay3d(five);
  CHECK(t5.dimension == 3);
  CHECK(t5.cells.size() == 4);
  for (const auto& c : t5.cells) CHECK(std::find(c.begin(), c.end(), 4u) != c.end());
  check_delaunay(five, t5);

  const auto t3 = delaunay3d(equilateral());
  CHECK(t3.dimension == 2);
  CHECK(t3.cells.size() == 1);
  CHECK(t3.cell_size == 3);
}

TEST_CASE("delaunay3d triangulates flat inputs through the jitter") {
  const std::vector<Vec3> line{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  const std::vector<Vec3> square{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  for (const auto& p : {line, square}) {
    const auto t = delaunay3d(p);
    CHECK(t.dimension == 3);
    CHECK(!t.cells.empty());
    check_delaunay(p, t);
  }
  // Flat cells never reach the alpha complex with a finite value below the
  // edge scale, so the line stays a path.
  const auto f = alpha_filtration(line);
  CHECK_NOTHROW(validate_filtration(f));
  for (const auto& s : f.simplices) CHECK(s.dimension() <= 1);
}

TEST_CASE("delaunay3d random clouds satisfy the empty-sphere property") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = random_cloud(rng, 5 + static_cast<std::size_t>(trial) * 3);
    check_delaunay(p, delaunay3d(p));
  }
}

TEST_CASE("delaunay3d on a cubic lattice tiles the cube") {
  std::vector<Vec3> p;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) p.push_back({double(i), double(j), double(k)});
  const auto t = delaunay3d(p);
  double volume = 0;
  for (const auto& c : t.cells) {
    volume += tet_volume(p, c);  // cospherical cubes may leave flat slivers
  }
  CHECK(volume == doctest::Approx(27.0).epsilon(1e-12));
  // Euler characteristic of a ball: V - E + F - T = 1.
  std::set<std::array<std::uint32_t, 2>> edges;
  std::set<std::array<std::uint32_t, 3>> faces;
  for (const auto& c : t.cells) {
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) edges.insert({c[a], c[b]});
    for (int s = 0; s < 4; ++s) {
      std::array<std::uint32_t, 3> f{};
      int n = 0;
      for (int m = 0; m < 4; ++m)
        if (m != s) f[n++] = c[m];
      faces.insert(f);
    }
  }
  CHECK(static_cast<long>(p.size()) - static_cast<long>(edges.size()) + static_cast<long>(faces.size()) -
            static_cast<long>(t.cells.size()) ==
        1);
}

TEST_CASE("circumradius") {
  const auto tri = equilateral();
  CHECK(circumradius(tri) == doctest::Approx(0.5773502691896256).epsilon(1e-12));
  const std::vector<Vec3> tet{{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0},
                              {0.5, std::sqrt(3.0) / 6, std::sqrt(2.0 / 3.0)}};
  CHECK(circumradius(tet) == doctest::Approx(0.6123724356957945).epsilon(1e-12));
  CHECK(std::isinf(circumradius(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}})));
  // Square: flat but concyclic.
  CHECK(circumradius(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}) ==
        doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("alpha filtration values") {
  const auto two = alpha_filtration(std::vector<Vec3>{{0, 0, 0}, {2, 0, 0}});
  REQUIRE(two.simplices.size() == 3);
  CHECK(find(two, {0, 1})->value == doctest::Approx(1.0));

  const auto tri = alpha_filtration(equilateral());
  CHECK(find(tri, {0, 1})->value == doctest::Approx(0.5));
  CHECK(find(tri, {1, 2})->value == doctest::Approx(0.5));
  CHECK(find(tri, {0, 1, 2})->value == doctest::Approx(0.5773503).epsilon(1e-6));

  const auto one = alpha_filtration(std::vector<Vec3>{{3, 4, 5}});
  REQUIRE(one.simplices.size() == 1);
  CHECK(one.simplices[0].value == 0.0);
}

TEST_CASE("alpha filtration: obtuse triangle edge is attached") {
  // The long edge's diametral sphere contains the apex, so it enters with the
  // triangle at the long edge's half length rather than earlier.
  const auto f = alpha_filtration(std::vector<Vec3>{{0, 0, 0}, {4, 0, 0}, {2, 0.5, 0}});
  const double tri = find(f, {0, 1, 2})->value;
  CHECK(find(f, {0, 1})->value == tri);
  CHECK(tri > 2.0);
}

TEST_CASE("alpha filtration is valid on random clouds") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_cloud(rng, 4 + static_cast<std::size_t>(trial % 20));
    const auto f = alpha_filtration(p, std::numeric_limits<double>::infinity());
    CHECK_NOTHROW(validate_filtration(f));
    CHECK(std::is_sorted(f.simplices.begin(), f.simplices.end(), filtration_less));
    // Every Delaunay tetrahedron appears.
    const auto t = delaunay3d(p);
    std::size_t tets = 0;
    for (const auto& s : f.simplices) tets += s.dimension() == 3;
    CHECK(tets == t.cells.size());
  }
}

TEST_CASE("max_value drops late simplices") {
  const auto f = alpha_filtration(std::vector<Vec3>{{0, 0, 0}, {10, 0, 0}}, 2.0);
  CHECK(f.simplices.size() == 2);
}

TEST_CASE("rips filtration") {
  const auto two = rips_filtration(std::vector<Vec3>{{0, 0, 0}, {2, 0, 0}}, 25.0, 3);
  CHECK(find(two, {0, 1})->value == doctest::Approx(1.0));
  const auto tri = rips_filtration(equilateral(), 25.0, 2);
  CHECK(find(tri, {0, 1, 2})->value == doctest::Approx(0.5));
  CHECK_NOTHROW(validate_filtration(tri));

  std::vector<Vec3> many(100);
  for (std::size_t i = 0; i < many.size(); ++i) many[i] = {double(i), 0, 0};
  try {
    (void)rips_filtration(many, 25.0, 2);
    FAIL("expected TooManyPoints");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooManyPoints);
  }
  CHECK_NOTHROW((void)rips_filtration(many, 0.6, 1, many.size()));
}

TEST_CASE("validate_filtration catches missing and late faces") {
  Filtration f;
  f.points = {{0, 0, 0}, {1, 0, 0}};
  f.simplices = {{{0}, 0}, {{0, 1}, 0.5}};
  CHECK_THROWS_AS(validate_filtration(f), Error);
  f.simplices = {{{0}, 0}, {{1}, 0.6}, {{0, 1}, 0.5}};
  CHECK_THROWS_AS(validate_filtration(f), Error);
  f.simplices = {{{0}, 0}, {{1}, 0}, {{0, 1}, 0.5}};
  CHECK_NOTHROW(validate_filtration(f));
}

TEST_CASE("filtration csv") {
  const auto f = alpha_filtration(std::vector<Vec3>{{0, 0, 0}, {2, 0, 0}});
  CHECK(filtration_csv(f) == "dim,v0,v1,v2,v3,value\n0,0,,,,0\n0,1,,,,0\n1,0,1,,,1\n");
}

TEST_CASE("jitter stays below the value quantum scale and follows the frame") {
  const Mat3 id = Mat3::identity();
  const Mat3 turned{{Vec3{0, 1, 0}, Vec3{-1, 0, 0}, Vec3{0, 0, 1}}};
  for (std::size_t i = 0; i < 20; ++i) {
    const Vec3 a = jitter_offset(i, id);
    CHECK(norm(a) <= kJitterMagnitude * std::sqrt(3.0));
    const Vec3 b = jitter_offset(i, turned);
    CHECK(b.x == -a.y);
    CHECK(b.y == a.x);
    CHECK(b.z == a.z);
  }
}
