#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "itt/clusters.hpp"
#include "itt/interaction.hpp"
#include "itt/persistence.hpp"
#include "itt/structure.hpp"

namespace itt {

inline constexpr int kPairCount = 42;
inline constexpr const char* kBundleFormatVersion = "1";

// Ordered (center, partner) pairs, center-major, partner ascending with the
// center skipped. Throws SamePair when they coincide, InvalidArgument when
// either lies outside 0..6.
int pair_index(int center, int partner);
std::pair<int, int> pair_from_index(int index);

struct FeaturizeConfig {
  GridSpec grid;
  double supercell_edge = 64.0;
  InteractionMode mode = InteractionMode::centered;
  double neighbor_cutoff = 8.0;
  double max_value = 25.0;
  std::size_t max_supercell_sites = kDefaultMaxSupercellSites;
  int threads = 1;  // topology tasks of one structure run on this many threads

  // Throws InvalidArgument on non-positive sizes or a bad grid.
  void validate() const;
};

struct BundleMeta {
  std::string source_id;
  GridSpec grid;
  InteractionMode mode = InteractionMode::centered;
  double supercell_edge = 64.0;
  double neighbor_cutoff = 8.0;
  double max_value = 25.0;
  std::string cluster_table;       // provenance of the cluster assignment
  std::string cluster_table_hash;  // FNV-1a of the serialized table, hex
  std::array<int, 3> supercell_repeats{1, 1, 1};
  std::size_t atom_count = 0;
  std::size_t supercell_atom_count = 0;

  friend bool operator==(const BundleMeta&, const BundleMeta&) = default;
};

struct EmbeddingBundle {
  BundleMeta meta;
  std::vector<float> structural;   // 3 * grid.count: H0 | H1 | H2
  std::vector<float> elemental;    // 7 rows of 3 * grid.count
  std::array<bool, kClusterCount> elemental_presence{};
  std::vector<float> interaction;  // 42 rows of 2 * grid.count: H0 | H1
  std::array<bool, kPairCount> interaction_presence{};
  AtomicGraph atomic;

  std::size_t structural_width() const { return 3 * static_cast<std::size_t>(meta.grid.count); }
  std::size_t interaction_width() const { return 2 * static_cast<std::size_t>(meta.grid.count); }
};

// Supercell in canonical site order with per-cluster point lists; shared by
// featurization and barcode inspection.
struct PreparedStructure {
  Structure supercell;
  std::vector<Vec3> points;
  std::array<std::vector<Vec3>, kClusterCount> cluster_points;
  Mat3 jitter_frame;
};

PreparedStructure prepare_structure(const Structure& s, const ClusterAssignment& clusters, const FeaturizeConfig& config);

EmbeddingBundle featurize_structure(const Structure& s, const ClusterAssignment& clusters,
                                    const FeaturizeConfig& config = {});

// Writes manifest.json, structural.f32, elemental.f32, interaction.f32 and
// atoms.json into dir (created if needed). Throws IoError.
void write_bundle(const EmbeddingBundle& b, const std::filesystem::path& dir);
// Throws BadManifest, ShapeMismatch or IoError.
EmbeddingBundle read_bundle(const std::filesystem::path& dir);

}  // namespace itt
