#include <doctest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "bundle_compare.hpp"
#include "itt/error.hpp"
#include "itt/featurize.hpp"

using namespace itt;

namespace {

Structure toy(double a, std::vector<std::pair<int, Vec3>> cart_sites) {
  Structure s;
  s.lattice = Lattice::from_parameters(a, a, a, 90, 90, 90);
  for (const auto& [z, c] : cart_sites) s.sites.push_back(make_site(s.lattice, z, s.lattice.to_fractional(c)));
  s.source_id = "toy";
  return s;
}

// Small framework-like cell: Zn corners, O and C linkers, H caps.
Structure mini_framework() {
  Structure s;
  s.lattice = Lattice::from_parameters(12.0, 12.5, 13.0, 90, 95, 90);
  const std::vector<std::pair<int, Vec3>> frac{
      {30, {0.0, 0.0, 0.0}},  {8, {0.12, 0.0, 0.0}},  {6, {0.24, 0.02, 0.01}}, {6, {0.5, 0.0, 0.0}},
      {1, {0.5, 0.09, 0.0}},  {8, {0.0, 0.12, 0.0}},  {6, {0.0, 0.25, 0.03}},  {7, {0.0, 0.5, 0.0}},
      {8, {0.0, 0.0, 0.12}},  {6, {0.02, 0.0, 0.26}}, {1, {0.1, 0.0, 0.5}},    {17, {0.5, 0.5, 0.5}},
  };
  for (const auto& [z, f] : frac) s.sites.push_back(make_site(s.lattice, z, f));
  s.source_id = "mini";
  return s;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("itt_featurize_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("pair indices") {
  CHECK(pair_index(0, 1) == 0);
  CHECK(pair_index(6, 5) == 41);
  CHECK(pair_index(1, 0) == 6);
  for (int q = 0; q < kPairCount; ++q) {
    const auto [c, p] = pair_from_index(q);
    CHECK(c != p);
    CHECK(pair_index(c, p) == q);
  }
  try {
    (void)pair_index(3, 3);
    FAIL("expected SamePair");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SamePair);
  }
  CHECK_THROWS_AS(pair_index(0, 7), Error);
}

TEST_CASE("config validation") {
  FeaturizeConfig c;
  CHECK_NOTHROW(c.validate());
  c.grid.count = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.supercell_edge = -1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.threads = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("bundle shapes") {
  const auto b = featurize_structure(mini_framework(), default_clusters());
  CHECK(b.structural.size() == 750);
  CHECK(b.elemental.size() == 7 * 750);
  CHECK(b.interaction.size() == 42 * 500);
  CHECK(b.atomic.nodes.size() <= 256);
  CHECK(b.meta.supercell_repeats == std::array<int, 3>{5, 5, 5});
  CHECK(b.meta.supercell_atom_count == 12 * 125);
  CHECK(b.meta.atom_count == 12);
}

TEST_CASE("single-cluster structure") {
  const auto s = toy(20, {{6, {0, 0, 0}}, {6, {1.4, 0, 0}}, {6, {0, 1.5, 0.3}}});
  const auto b = featurize_structure(s, default_clusters());
  const std::size_t w = b.structural_width();
  const int carbon = default_clusters()[6];
  for (std::size_t i = 0; i < w; ++i) CHECK(b.structural[i] == b.elemental[static_cast<std::size_t>(carbon) * w + i]);
  for (float v : b.interaction) CHECK(v == 0.0f);
  for (bool p : b.interaction_presence) CHECK(!p);
  CHECK(b.elemental_presence[static_cast<std::size_t>(carbon)]);
}

TEST_CASE("two-atom contact") {
  const auto s = toy(100, {{6, {0, 0, 0}}, {8, {2, 0, 0}}});
  const auto b = featurize_structure(s, default_clusters());
  CHECK(b.meta.supercell_repeats == std::array<int, 3>{1, 1, 1});
  const int c = default_clusters()[6], o = default_clusters()[8];
  const std::size_t row = static_cast<std::size_t>(pair_index(c, o)) * b.interaction_width();
  for (int k = 0; k < 250; ++k) {
    CAPTURE(k);
    CHECK(b.interaction[row + static_cast<std::size_t>(k)] == (k >= 10 ? 1.0f : 0.0f));
    CHECK(b.interaction[row + 250 + static_cast<std::size_t>(k)] == 0.0f);
  }
  CHECK(b.interaction_presence[static_cast<std::size_t>(pair_index(o, c))]);
}

TEST_CASE("single point structure") {
  const auto b = featurize_structure(toy(64, {{6, {1, 1, 1}}}), default_clusters());
  for (int k = 0; k < 250; ++k) CHECK(b.structural[static_cast<std::size_t>(k)] == 1.0f);
  for (std::size_t k = 250; k < 750; ++k) CHECK(b.structural[k] == 0.0f);
}

TEST_CASE("thread count does not change the bundle") {
  const auto s = mini_framework();
  FeaturizeConfig one, many;
  many.threads = 6;
  const auto a = featurize_structure(s, default_clusters(), one);
  const auto b = featurize_structure(s, default_clusters(), many);
  CHECK(testing::bundle_difference(a, b) == "");
  CHECK(a.meta == b.meta);
}

TEST_CASE("rigid motions and site permutations leave the bundle unchanged") {
  const auto s = mini_framework();
  const auto base = featurize_structure(s, default_clusters());
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    // Random rotation from a normalized quaternion.
    double q[4] = {g(rng), g(rng), g(rng), g(rng)};
    const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    for (double& x : q) x /= n;
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    const Mat3 r{{Vec3{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
                  Vec3{2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
                  Vec3{2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
    const auto moved = rigidly_moved(s, r, {g(rng) * 10, g(rng) * 10, g(rng) * 10});
    CHECK(testing::bundle_difference(base, featurize_structure(moved, default_clusters()), false) == "");

    auto shuffled = s;
    std::shuffle(shuffled.sites.begin(), shuffled.sites.end(), rng);
    CHECK(testing::bundle_difference(base, featurize_structure(shuffled, default_clusters())) == "");
  }
}

TEST_CASE("bundle round trip") {
  const auto b = featurize_structure(mini_framework(), default_clusters());
  const auto dir = scratch("roundtrip");
  write_bundle(b, dir);
  CHECK(std::filesystem::file_size(dir / "structural.f32") == 3000);
  CHECK(std::filesystem::file_size(dir / "elemental.f32") == 7 * 3000);
  CHECK(std::filesystem::file_size(dir / "interaction.f32") == 42 * 2000);
  const auto back = read_bundle(dir);
  CHECK(testing::bundle_difference(b, back) == "");
  CHECK(back.meta == b.meta);

  std::ifstream in(dir / "manifest.json");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("\"format_version\": \"1\"") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("tampered bundles are rejected") {
  const auto b = featurize_structure(toy(64, {{6, {0, 0, 0}}, {8, {1.2, 0, 0}}}), default_clusters());
  auto expect = [](const std::filesystem::path& dir, Errc code) {
    try {
      (void)read_bundle(dir);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };
  const auto dir = scratch("tamper");
  write_bundle(b, dir);
  std::filesystem::resize_file(dir / "interaction.f32", 42 * 2000 - 4);
  expect(dir, Errc::ShapeMismatch);

  write_bundle(b, dir);
  std::filesystem::remove(dir / "manifest.json");
  expect(dir, Errc::BadManifest);

  write_bundle(b, dir);
  std::ofstream(dir / "manifest.json") << "{not json";
  expect(dir, Errc::BadManifest);

  write_bundle(b, dir);
  std::filesystem::remove(dir / "structural.f32");
  expect(dir, Errc::IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("fifty-atom toy featurizes quickly") {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int zs[] = {1, 6, 7, 8, 30, 17, 26};
  Structure s;
  s.lattice = Lattice::from_parameters(64, 64, 64, 90, 90, 90);
  while (s.sites.size() < 50) {
    const Vec3 f{u(rng), u(rng), u(rng)};
    bool clash = false;
    for (const auto& t : s.sites) clash |= min_image_distance(s.lattice, t.frac, f) < 1.0;
    if (!clash) s.sites.push_back(make_site(s.lattice, zs[s.sites.size() % 7], f));
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = featurize_structure(s, default_clusters());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(b.structural.size() == 750);
  CHECK(seconds < 1.0);
}
