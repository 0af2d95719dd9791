#pragma once

// Seven element clusters (C0..C6) built from corpus co-occurrence and
// periodic-table similarity. H, C, N and O are singletons 0..3 and Zn seeds
// cluster 4; clusters 5 and 6 are seeded by farthest-point selection.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itt/elements.hpp"

namespace itt {

inline constexpr int kClusterCount = 7;

struct ClusterAssignment {
  // Indexed by atomic number; -1 marks an unmapped element. Entry 0 is unused.
  std::array<int, kMaxSupportedZ + 1> cluster_of{};
  std::vector<std::pair<int, int>> anchors;  // (Z, cluster id)
  std::string provenance;
  double lambda = 0.5;

  ClusterAssignment() { cluster_of.fill(-1); }

  bool contains(int z) const { return z >= 1 && z <= kMaxSupportedZ && cluster_of[static_cast<std::size_t>(z)] >= 0; }

  // Cluster id of an element; throws UnknownElement when unmapped.
  int operator[](int z) const;

  // Checks ids 0..6 are all used, anchors distinct; throws InvalidArgument.
  void validate() const;

  friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

struct CooccurrenceMatrix {
  std::vector<std::uint64_t> counts;  // (kMaxSupportedZ x kMaxSupportedZ), row-major by Z-1
  std::uint64_t structure_count = 0;

  CooccurrenceMatrix() : counts(static_cast<std::size_t>(kMaxSupportedZ) * kMaxSupportedZ, 0) {}

  std::uint64_t at(int zi, int zj) const {
    return counts[static_cast<std::size_t>(zi - 1) * kMaxSupportedZ + static_cast<std::size_t>(zj - 1)];
  }
  std::uint64_t& at(int zi, int zj) {
    return counts[static_cast<std::size_t>(zi - 1) * kMaxSupportedZ + static_cast<std::size_t>(zj - 1)];
  }
};

// Per-element descriptors: atomic number, group, block one-hot (4), Pauling
// electronegativity, valence electrons, covalent radius.
struct ChemFeatures {
  static constexpr std::size_t kWidth = 9;
  std::vector<int> elements;                              // atomic numbers, ascending
  std::vector<std::array<double, kWidth>> raw;            // as supplied
  std::vector<std::array<double, kWidth>> standardized;   // zero mean / unit variance per column

  ChemFeatures(std::vector<int> elements, std::vector<std::array<double, kWidth>> raw);

  // Row for an element, or nullptr.
  const std::array<double, kWidth>* find(int z) const;
};

// Features for elements 1..103 from the shipped periodic-table asset.
const ChemFeatures& default_features();

CooccurrenceMatrix cooccurrence_matrix(std::span<const std::vector<int>> corpus);

// Cosine similarity of standardized descriptors.
double chemical_similarity(int a, int b, const ChemFeatures& features);

ClusterAssignment compute_clusters(const CooccurrenceMatrix& cooc, const ChemFeatures& features,
                                   double lambda = 0.5);

// Objective maximized by compute_clusters, over the corpus elements mapped
// to clusters 4..6 (the singleton anchors contribute nothing).
double clustering_score(const ClusterAssignment& assignment, const CooccurrenceMatrix& cooc,
                        const ChemFeatures& features, double lambda);

// Frozen built-in table: H, C, N, O singletons; metals with Zn; metalloids
// and halogens; remaining p-block and f-block.
const ClusterAssignment& default_clusters();

// Text table: '#'-prefixed header lines then `symbol<TAB>cluster_id` per element.
std::string write_cluster_table(const ClusterAssignment& assignment);
ClusterAssignment read_cluster_table(std::string_view text);

}  // namespace itt
