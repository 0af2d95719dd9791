#include "itt/featurize.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "itt/elements.hpp"
#include "itt/error.hpp"

namespace itt {
namespace {

using nlohmann::json;

// Orthonormal frame that turns with the lattice.
Mat3 lattice_frame(const Lattice& l) {
  Vec3 e0 = l.vectors[0];
  e0 = (1.0 / norm(e0)) * e0;
  Vec3 e1 = l.vectors[1] - dot(l.vectors[1], e0) * e0;
  e1 = (1.0 / norm(e1)) * e1;
  const Vec3 e2 = cross(e0, e1);
  return Mat3{{e0, e1, e2}};
}

std::int64_t frac_key(double f) { return std::llround(f * 1e9); }

void append_curves(std::vector<float>& dst, std::size_t offset, const BettiGrid& g, int dims) {
  const int n = g.grid.count;
  for (int p = 0; p < dims; ++p)
    for (int k = 0; k < n; ++k)
      dst[offset + static_cast<std::size_t>(p) * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] =
          static_cast<float>(g.at(k, p));
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void run_tasks(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void write_f32(const std::filesystem::path& path, const std::vector<float>& data) {
  std::string bytes(data.size() * 4, '\0');
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(data[i]);
    for (int b = 0; b < 4; ++b) bytes[i * 4 + static_cast<std::size_t>(b)] = static_cast<char>((bits >> (8 * b)) & 0xffu);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
}

std::vector<float> read_f32(const std::filesystem::path& path, std::size_t expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() != expected * 4) {
    throw Error(Errc::ShapeMismatch, path.filename().string() + " holds " + std::to_string(bytes.size()) +
                                         " bytes, manifest implies " + std::to_string(expected * 4));
  }
  std::vector<float> data(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i * 4 + static_cast<std::size_t>(b)])) << (8 * b);
    data[i] = std::bit_cast<float>(bits);
  }
  return data;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
}

}  // namespace

int pair_index(int center, int partner) {
  if (center < 0 || center >= kClusterCount || partner < 0 || partner >= kClusterCount) {
    throw Error(Errc::InvalidArgument, "cluster ids must lie in 0..6");
  }
  if (center == partner) throw Error(Errc::SamePair, "interaction pair needs two different clusters");
  return center * (kClusterCount - 1) + (partner < center ? partner : partner - 1);
}

std::pair<int, int> pair_from_index(int index) {
  if (index < 0 || index >= kPairCount) throw Error(Errc::InvalidArgument, "pair index must lie in 0..41");
  const int center = index / (kClusterCount - 1);
  const int r = index % (kClusterCount - 1);
  return {center, r < center ? r : r + 1};
}

void FeaturizeConfig::validate() const {
  grid.validate();
  if (!(supercell_edge > 0)) throw Error(Errc::InvalidArgument, "supercell edge must be positive");
  if (!(neighbor_cutoff > 0)) throw Error(Errc::InvalidArgument, "neighbor cutoff must be positive");
  if (!(max_value > 0)) throw Error(Errc::InvalidArgument, "max filtration value must be positive");
  if (max_supercell_sites == 0) throw Error(Errc::InvalidArgument, "supercell site cap must be positive");
  if (threads < 1) throw Error(Errc::InvalidArgument, "thread count must be at least 1");
}

PreparedStructure prepare_structure(const Structure& s, const ClusterAssignment& clusters,
                                    const FeaturizeConfig& config) {
  if (s.sites.empty()) throw Error(Errc::MissingAtoms, "structure has no atoms");
  PreparedStructure p;
  p.supercell = build_supercell(s, config.supercell_edge, config.max_supercell_sites);
  auto& sites = p.supercell.sites;
  // Canonical order makes the result independent of input site order.
  std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    return std::make_tuple(frac_key(a.frac.x), frac_key(a.frac.y), frac_key(a.frac.z), a.z) <
           std::make_tuple(frac_key(b.frac.x), frac_key(b.frac.y), frac_key(b.frac.z), b.z);
  });
  p.jitter_frame = lattice_frame(p.supercell.lattice);
  p.points.reserve(sites.size());
  for (const Site& site : sites) {
    p.points.push_back(site.cart);
    p.cluster_points[static_cast<std::size_t>(clusters[site.z])].push_back(site.cart);
  }
  return p;
}

EmbeddingBundle featurize_structure(const Structure& s, const ClusterAssignment& clusters,
                                    const FeaturizeConfig& config) {
  config.validate();
  const PreparedStructure prep = prepare_structure(s, clusters, config);
  EmbeddingBundle b;
  b.meta.source_id = s.source_id;
  b.meta.grid = config.grid;
  b.meta.mode = config.mode;
  b.meta.supercell_edge = config.supercell_edge;
  b.meta.neighbor_cutoff = config.neighbor_cutoff;
  b.meta.max_value = config.max_value;
  b.meta.cluster_table = clusters.provenance;
  b.meta.cluster_table_hash = hex64(fnv1a(write_cluster_table(clusters)));
  b.meta.supercell_repeats = supercell_repeats(s.lattice, config.supercell_edge);
  b.meta.atom_count = s.sites.size();
  b.meta.supercell_atom_count = prep.points.size();

  const std::size_t sw = b.structural_width(), iw = b.interaction_width();
  b.structural.assign(sw, 0.0f);
  b.elemental.assign(kClusterCount * sw, 0.0f);
  b.interaction.assign(kPairCount * iw, 0.0f);
  for (int k = 0; k < kClusterCount; ++k) b.elemental_presence[static_cast<std::size_t>(k)] = !prep.cluster_points[static_cast<std::size_t>(k)].empty();
  for (int q = 0; q < kPairCount; ++q) {
    const auto [i, j] = pair_from_index(q);
    b.interaction_presence[static_cast<std::size_t>(q)] =
        b.elemental_presence[static_cast<std::size_t>(i)] && b.elemental_presence[static_cast<std::size_t>(j)];
  }

  // Task 0 is the structural token, 1..7 the elemental ones, the rest pairs.
  // Every task writes a disjoint slice, so the result is thread-count independent.
  auto classical = [&](const std::vector<Vec3>& pts, std::vector<float>& dst, std::size_t offset) {
    const Filtration f = alpha_filtration(pts, config.max_value, prep.jitter_frame);
    append_curves(dst, offset, betti_curve(reduce(f, 2), config.grid, 2), 3);
  };
  run_tasks(1 + kClusterCount + kPairCount, config.threads, [&](std::size_t task) {
    if (task == 0) {
      classical(prep.points, b.structural, 0);
    } else if (task <= static_cast<std::size_t>(kClusterCount)) {
      const std::size_t k = task - 1;
      if (b.elemental_presence[k]) classical(prep.cluster_points[k], b.elemental, k * sw);
    } else {
      const int q = static_cast<int>(task) - 1 - kClusterCount;
      if (!b.interaction_presence[static_cast<std::size_t>(q)]) return;
      const auto [i, j] = pair_from_index(q);
      const BettiGrid g = interaction_betti_curves(prep.cluster_points[static_cast<std::size_t>(i)],
                                                   prep.cluster_points[static_cast<std::size_t>(j)], config.mode,
                                                   config.grid, config.max_value, prep.jitter_frame);
      append_curves(b.interaction, static_cast<std::size_t>(q) * iw, g, 2);
    }
  });

  b.atomic = unique_atoms(s, clusters, config.neighbor_cutoff);
  return b;
}

void write_bundle(const EmbeddingBundle& b, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  const int n = b.meta.grid.count;
  json manifest;
  manifest["format_version"] = kBundleFormatVersion;
  manifest["source_id"] = b.meta.source_id;
  manifest["grid"] = {{"start", b.meta.grid.start}, {"step", b.meta.grid.step}, {"count", n}};
  manifest["mode"] = std::string(mode_name(b.meta.mode));
  manifest["supercell_edge"] = b.meta.supercell_edge;
  manifest["neighbor_cutoff"] = b.meta.neighbor_cutoff;
  manifest["max_value"] = b.meta.max_value;
  manifest["cluster_table"] = b.meta.cluster_table;
  manifest["cluster_table_hash"] = b.meta.cluster_table_hash;
  manifest["element_table"] = kElementTableVersion;
  manifest["supercell_repeats"] = b.meta.supercell_repeats;
  manifest["atom_count"] = b.meta.atom_count;
  manifest["supercell_atom_count"] = b.meta.supercell_atom_count;
  manifest["elemental_presence"] = b.elemental_presence;
  manifest["interaction_presence"] = b.interaction_presence;
  manifest["shapes"] = {{"structural", {3 * n}},
                        {"elemental", {kClusterCount, 3 * n}},
                        {"interaction", {kPairCount, 2 * n}},
                        {"atomic_nodes", {b.atomic.nodes.size()}}};
  manifest["dtype"] = "float32-le";
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");

  write_f32(dir / "structural.f32", b.structural);
  write_f32(dir / "elemental.f32", b.elemental);
  write_f32(dir / "interaction.f32", b.interaction);

  json atoms;
  atoms["cutoff"] = b.atomic.cutoff;
  atoms["truncated"] = b.atomic.truncated;
  atoms["unique_count"] = b.atomic.unique_count;
  json nodes = json::array();
  for (const AtomicNode& node : b.atomic.nodes) {
    nodes.push_back({{"element", std::string(element_symbol(node.z))},
                     {"z", node.z},
                     {"cluster", node.cluster},
                     {"position", {node.position.x, node.position.y, node.position.z}},
                     {"multiplicity", node.multiplicity},
                     {"key_hash", hex64(node.key_hash)}});
  }
  atoms["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const AtomicEdge& e : b.atomic.edges) edges.push_back({{"i", e.i}, {"j", e.j}, {"distance", e.distance}});
  atoms["edges"] = std::move(edges);
  write_text(dir / "atoms.json", atoms.dump(2) + "\n");
}

EmbeddingBundle read_bundle(const std::filesystem::path& dir) {
  json manifest;
  {
    std::ifstream in(dir / "manifest.json", std::ios::binary);
    if (!in) throw Error(Errc::BadManifest, "missing manifest.json in " + dir.string());
    try {
      in >> manifest;
    } catch (const json::exception& e) {
      throw Error(Errc::BadManifest, std::string("manifest.json does not parse: ") + e.what());
    }
  }
  EmbeddingBundle b;
  try {
    if (manifest.at("format_version").get<std::string>() != kBundleFormatVersion) {
      throw Error(Errc::BadManifest, "unsupported bundle format version");
    }
    b.meta.source_id = manifest.at("source_id").get<std::string>();
    b.meta.grid.start = manifest.at("grid").at("start").get<double>();
    b.meta.grid.step = manifest.at("grid").at("step").get<double>();
    b.meta.grid.count = manifest.at("grid").at("count").get<int>();
    b.meta.mode = parse_mode(manifest.at("mode").get<std::string>());
    b.meta.supercell_edge = manifest.at("supercell_edge").get<double>();
    b.meta.neighbor_cutoff = manifest.at("neighbor_cutoff").get<double>();
    b.meta.max_value = manifest.at("max_value").get<double>();
    b.meta.cluster_table = manifest.at("cluster_table").get<std::string>();
    b.meta.cluster_table_hash = manifest.at("cluster_table_hash").get<std::string>();
    b.meta.supercell_repeats = manifest.at("supercell_repeats").get<std::array<int, 3>>();
    b.meta.atom_count = manifest.at("atom_count").get<std::size_t>();
    b.meta.supercell_atom_count = manifest.at("supercell_atom_count").get<std::size_t>();
    b.elemental_presence = manifest.at("elemental_presence").get<std::array<bool, kClusterCount>>();
    b.interaction_presence = manifest.at("interaction_presence").get<std::array<bool, kPairCount>>();
  } catch (const json::exception& e) {
    throw Error(Errc::BadManifest, std::string("manifest.json is incomplete: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::BadManifest) throw;
    throw Error(Errc::BadManifest, e.what());
  }
  if (b.meta.grid.count < 1) throw Error(Errc::BadManifest, "grid count must be positive");
  const std::size_t n = static_cast<std::size_t>(b.meta.grid.count);
  try {
    const auto shapes = manifest.at("shapes");
    const auto expect = [&](const char* key, std::vector<std::size_t> dims) {
      if (shapes.at(key).get<std::vector<std::size_t>>() != dims) {
        throw Error(Errc::ShapeMismatch, std::string("manifest shape for ") + key + " disagrees with its grid");
      }
    };
    expect("structural", {3 * n});
    expect("elemental", {kClusterCount, 3 * n});
    expect("interaction", {kPairCount, 2 * n});
  } catch (const json::exception& e) {
    throw Error(Errc::BadManifest, std::string("manifest shapes are malformed: ") + e.what());
  }
  b.structural = read_f32(dir / "structural.f32", 3 * n);
  b.elemental = read_f32(dir / "elemental.f32", kClusterCount * 3 * n);
  b.interaction = read_f32(dir / "interaction.f32", kPairCount * 2 * n);

  json atoms;
  {
    std::ifstream in(dir / "atoms.json", std::ios::binary);
    if (!in) throw Error(Errc::IoError, "missing atoms.json in " + dir.string());
    try {
      in >> atoms;
      b.atomic.cutoff = atoms.at("cutoff").get<double>();
      b.atomic.truncated = atoms.at("truncated").get<bool>();
      b.atomic.unique_count = atoms.at("unique_count").get<std::size_t>();
      for (const auto& node : atoms.at("nodes")) {
        AtomicNode a;
        a.z = node.at("z").get<int>();
        a.cluster = node.at("cluster").get<int>();
        const auto pos = node.at("position").get<std::array<double, 3>>();
        a.position = {pos[0], pos[1], pos[2]};
        a.multiplicity = node.at("multiplicity").get<std::uint32_t>();
        a.key_hash = std::stoull(node.at("key_hash").get<std::string>(), nullptr, 16);
        b.atomic.nodes.push_back(a);
      }
      for (const auto& edge : atoms.at("edges")) {
        b.atomic.edges.push_back(
            {edge.at("i").get<std::uint32_t>(), edge.at("j").get<std::uint32_t>(), edge.at("distance").get<double>()});
      }
    } catch (const json::exception& e) {
      throw Error(Errc::BadManifest, std::string("atoms.json is malformed: ") + e.what());
    }
  }
  if (manifest.contains("shapes") && manifest["shapes"].contains("atomic_nodes") &&
      manifest["shapes"]["atomic_nodes"] != json::array({b.atomic.nodes.size()})) {
    throw Error(Errc::ShapeMismatch, "atoms.json node count disagrees with the manifest");
  }
  return b;
}

}  // namespace itt
