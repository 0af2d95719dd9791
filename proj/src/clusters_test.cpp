#include <doctest.h>

#include <random>
#include <set>

#include "itt/clusters.hpp"
#include "itt/error.hpp"

using namespace itt;

namespace {

int z(std::string_view sym) { return atomic_number(sym).value(); }

std::vector<std::vector<int>> sets(std::initializer_list<std::initializer_list<const char*>> in) {
  std::vector<std::vector<int>> out;
  for (const auto& s : in) {
    std::vector<int> v;
    for (const char* e : s) v.push_back(z(e));
    out.push_back(v);
  }
  return out;
}

std::vector<std::vector<int>> synthetic_corpus(std::mt19937_64& rng, const std::vector<int>& pool, int n) {
  std::vector<std::vector<int>> corpus;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < n; ++i) {
    std::set<int> s{z("C"), z("H")};
    for (int k = 0; k < 3; ++k) s.insert(pool[pick(rng)]);
    corpus.emplace_back(s.begin(), s.end());
  }
  return corpus;
}

}  // namespace

TEST_CASE("co-occurrence counts") {
  const auto m = cooccurrence_matrix(sets({{"C", "H"}, {"C", "O"}}));
  CHECK(m.at(z("C"), z("H")) == 1);
  CHECK(m.at(z("H"), z("C")) == 1);
  CHECK(m.at(z("C"), z("O")) == 1);
  CHECK(m.at(z("H"), z("O")) == 0);
  CHECK(m.at(z("C"), z("C")) == 2);
  CHECK(m.structure_count == 2);

  const auto single = cooccurrence_matrix(sets({{"C"}}));
  for (int a = 1; a <= kMaxSupportedZ; ++a)
    for (int b = 1; b <= kMaxSupportedZ; ++b)
      if (a != b) CHECK(single.at(a, b) == 0);

  CHECK_THROWS_AS(cooccurrence_matrix({}), Error);
}

TEST_CASE("co-occurrence matches a pairwise loop") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> el(1, 103);
  std::vector<std::vector<int>> corpus;
  for (int i = 0; i < 100; ++i) {
    std::set<int> s;
    for (int k = 0; k < 5; ++k) s.insert(el(rng));
    corpus.emplace_back(s.begin(), s.end());
  }
  const auto m = cooccurrence_matrix(corpus);
  for (int a = 1; a <= 103; a += 3)
    for (int b = 1; b <= 103; b += 5) {
      std::uint64_t n = 0;
      for (const auto& s : corpus) {
        const bool ha = std::find(s.begin(), s.end(), a) != s.end();
        const bool hb = std::find(s.begin(), s.end(), b) != s.end();
        n += ha && hb;
      }
      CHECK(m.at(a, b) == n);
    }
}

TEST_CASE("chemical similarity") {
  const auto& f = default_features();
  CHECK(chemical_similarity(z("C"), z("C"), f) == doctest::Approx(1.0));
  CHECK(chemical_similarity(z("Na"), z("K"), f) > chemical_similarity(z("Na"), z("F"), f));
  try {
    (void)chemical_similarity(104, z("C"), f);
    FAIL("expected UnknownElement");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownElement);
  }
}

TEST_CASE("seeding on a seven-element corpus") {
  const auto corpus = sets({{"H", "C", "N", "O", "Zn"}, {"C", "H", "Fe", "Cl"}, {"C", "O", "Zn", "Cl"}});
  const auto a = compute_clusters(cooccurrence_matrix(corpus), default_features());
  CHECK_NOTHROW(a.validate());
  CHECK(a[z("H")] == 0);
  CHECK(a[z("C")] == 1);
  CHECK(a[z("N")] == 2);
  CHECK(a[z("O")] == 3);
  CHECK(a[z("Zn")] == 4);
  std::set<int> rest{a[z("Fe")], a[z("Cl")]};
  CHECK(rest == std::set<int>{5, 6});
  for (int e = 1; e <= kMaxSupportedZ; ++e) CHECK(a.contains(e));
}

TEST_CASE("too few elements") {
  try {
    (void)compute_clusters(cooccurrence_matrix(sets({{"C", "H"}})), default_features());
    FAIL("expected InsufficientElements");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InsufficientElements);
  }
  CHECK_THROWS_AS(compute_clusters(cooccurrence_matrix(sets({{"C", "H", "N", "O", "Zn", "Fe", "Cl"}})),
                                   default_features(), 1.5),
                  Error);
}

TEST_CASE("greedy plus swaps beats random partitions") {
  std::mt19937_64 rng(12);
  const std::vector<int> pool{z("Zn"), z("Fe"), z("Cu"), z("Co"), z("Cl"), z("Br"), z("S"), z("P")};
  const auto corpus = synthetic_corpus(rng, pool, 60);
  const auto cooc = cooccurrence_matrix(corpus);
  const auto& f = default_features();
  const auto best = compute_clusters(cooc, f);
  const double best_score = clustering_score(best, cooc, f, 0.5);

  std::vector<int> free;
  for (int e : {z("Fe"), z("Cu"), z("Co"), z("Cl"), z("Br"), z("S"), z("P")}) free.push_back(e);
  std::uniform_int_distribution<int> cl(4, 6);
  int beaten = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    ClusterAssignment r = best;
    for (int e : free) r.cluster_of[static_cast<std::size_t>(e)] = cl(rng);
    if (clustering_score(r, cooc, f, 0.5) > best_score + 1e-12) ++beaten;
  }
  CHECK(beaten == 0);
}

TEST_CASE("clustering is deterministic, a fixed point and scale free") {
  std::mt19937_64 rng(13);
  const std::vector<int> pool{z("Zn"), z("Cu"), z("Mg"), z("Cl"), z("F"), z("S"), z("Si"), z("Al")};
  const auto cooc = cooccurrence_matrix(synthetic_corpus(rng, pool, 40));
  const auto& f = default_features();
  const auto a = compute_clusters(cooc, f);
  CHECK(compute_clusters(cooc, f) == a);
  CHECK(write_cluster_table(compute_clusters(cooc, f)) == write_cluster_table(a));

  // Any single move of a free element lowers or keeps the score.
  const double s = clustering_score(a, cooc, f, 0.5);
  for (int e : pool) {
    if (e == z("Zn")) continue;
    for (int c = 4; c <= 6; ++c) {
      ClusterAssignment moved = a;
      moved.cluster_of[static_cast<std::size_t>(e)] = c;
      CHECK(clustering_score(moved, cooc, f, 0.5) <= s + 1e-12);
    }
  }

  auto raw = f.raw;
  for (auto& row : raw)
    for (auto& v : row) v *= 3.5;
  const ChemFeatures scaled(f.elements, raw);
  CHECK(compute_clusters(cooc, scaled).cluster_of == a.cluster_of);
}

TEST_CASE("default clusters") {
  const auto& d = default_clusters();
  CHECK_NOTHROW(d.validate());
  CHECK(d[z("C")] != d[z("H")]);
  CHECK(d[z("Zn")] == 4);
  for (int e = 1; e <= 103; ++e) CHECK(d.contains(e));
}

TEST_CASE("cluster table round trip") {
  const auto& d = default_clusters();
  const std::string text = write_cluster_table(d);
  CHECK(text.starts_with("#"));
  const auto back = read_cluster_table(text);
  CHECK(back.cluster_of == d.cluster_of);
  CHECK(back.provenance == d.provenance);
  CHECK_THROWS_AS(read_cluster_table("# x\nC\t9\n"), Error);
  CHECK_THROWS_AS(read_cluster_table("Qq\t1\n"), Error);
}
