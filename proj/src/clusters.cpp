#include "itt/clusters.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>

#include "itt/error.hpp"

namespace itt {
namespace {

constexpr int kH = 1, kC = 6, kN = 7, kO = 8, kZn = 30;
constexpr std::array<std::pair<int, int>, 5> kAnchors{{{kH, 0}, {kC, 1}, {kN, 2}, {kO, 3}, {kZn, 4}}};

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Pairwise terms of the clustering objective over a working element set.
class Objective {
 public:
  Objective(std::vector<int> elements, const CooccurrenceMatrix& cooc, const ChemFeatures& features, double lambda)
      : elements_(std::move(elements)), lambda_(lambda) {
    const std::size_t n = elements_.size();
    std::uint64_t max_off = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (a != b) max_off = std::max(max_off, cooc.at(elements_[a], elements_[b]));
    sim_.assign(n * n, 0.0);
    dissim_.assign(n * n, 1.0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        sim_[a * n + b] = chemical_similarity(elements_[a], elements_[b], features);
        if (max_off > 0) {
          dissim_[a * n + b] = 1.0 - static_cast<double>(cooc.at(elements_[a], elements_[b])) / static_cast<double>(max_off);
        }
      }
    }
  }

  std::size_t size() const { return elements_.size(); }
  int element(std::size_t i) const { return elements_[i]; }
  std::size_t index_of(int z) const {
    return static_cast<std::size_t>(std::find(elements_.begin(), elements_.end(), z) - elements_.begin());
  }

  double sim(std::size_t a, std::size_t b) const { return sim_[a * size() + b]; }
  double cooc_dissim(std::size_t a, std::size_t b) const { return dissim_[a * size() + b]; }
  // Hybrid dissimilarity used for farthest-point seeding.
  double hybrid_dissim(std::size_t a, std::size_t b) const {
    return lambda_ * (1.0 - sim(a, b)) / 2.0 + (1.0 - lambda_) * cooc_dissim(a, b);
  }

  // Affinity of element a for the cluster whose members are listed.
  double score(std::size_t a, const std::vector<int>& cluster, int k) const {
    double s = 0, d = 0;
    int count = 0;
    for (std::size_t b = 0; b < size(); ++b) {
      if (b == a || cluster[b] != k) continue;
      s += sim(a, b);
      d += cooc_dissim(a, b);
      ++count;
    }
    if (count == 0) return 0.0;
    return lambda_ * s / count + (1.0 - lambda_) * d / count;
  }

  double total(const std::vector<int>& cluster) const {
    double t = 0;
    for (std::size_t a = 0; a < size(); ++a) {
      if (cluster[a] >= 4) t += score(a, cluster, cluster[a]);
    }
    return t;
  }

 private:
  std::vector<int> elements_;
  double lambda_;
  std::vector<double> sim_, dissim_;
};

}  // namespace

int ClusterAssignment::operator[](int z) const {
  if (!contains(z)) throw Error(Errc::UnknownElement, "element Z=" + std::to_string(z) + " has no cluster");
  return cluster_of[static_cast<std::size_t>(z)];
}

void ClusterAssignment::validate() const {
  std::array<int, kClusterCount> used{};
  for (int z = 1; z <= kMaxSupportedZ; ++z) {
    const int k = cluster_of[static_cast<std::size_t>(z)];
    if (k < -1 || k >= kClusterCount) throw Error(Errc::InvalidArgument, "cluster id out of range");
    if (k >= 0) ++used[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < kClusterCount; ++k) {
    if (used[static_cast<std::size_t>(k)] == 0) {
      throw Error(Errc::InvalidArgument, "cluster " + std::to_string(k) + " is empty");
    }
  }
  std::set<int> anchor_clusters;
  for (const auto& [z, k] : anchors) {
    if (!contains(z) || (*this)[z] != k) throw Error(Errc::InvalidArgument, "anchor table disagrees with mapping");
    if (!anchor_clusters.insert(k).second) throw Error(Errc::InvalidArgument, "two anchors share a cluster");
  }
}

ChemFeatures::ChemFeatures(std::vector<int> elems, std::vector<std::array<double, kWidth>> rows)
    : elements(std::move(elems)), raw(std::move(rows)) {
  if (elements.size() != raw.size()) throw Error(Errc::InvalidArgument, "feature rows do not match elements");
  const std::size_t n = raw.size();
  standardized = raw;
  for (std::size_t c = 0; c < kWidth; ++c) {
    double mean = 0;
    for (const auto& r : raw) mean += r[c];
    mean /= static_cast<double>(std::max<std::size_t>(n, 1));
    double var = 0;
    for (const auto& r : raw) var += (r[c] - mean) * (r[c] - mean);
    var /= static_cast<double>(std::max<std::size_t>(n, 1));
    const double sd = std::sqrt(var);
    for (auto& r : standardized) r[c] = sd > 0 ? (r[c] - mean) / sd : 0.0;
  }
}

const std::array<double, ChemFeatures::kWidth>* ChemFeatures::find(int z) const {
  const auto it = std::lower_bound(elements.begin(), elements.end(), z);
  if (it == elements.end() || *it != z) return nullptr;
  return &standardized[static_cast<std::size_t>(it - elements.begin())];
}

const ChemFeatures& default_features() {
  static const ChemFeatures features = [] {
    std::vector<int> zs;
    std::vector<std::array<double, ChemFeatures::kWidth>> rows;
    for (const ElementData& e : element_table()) {
      zs.push_back(e.z);
      rows.push_back({static_cast<double>(e.z), static_cast<double>(e.group), e.block == Block::s ? 1.0 : 0.0,
                      e.block == Block::p ? 1.0 : 0.0, e.block == Block::d ? 1.0 : 0.0,
                      e.block == Block::f ? 1.0 : 0.0, e.electronegativity,
                      static_cast<double>(e.valence_electrons), e.radius_pm});
    }
    return ChemFeatures(std::move(zs), std::move(rows));
  }();
  return features;
}

CooccurrenceMatrix cooccurrence_matrix(std::span<const std::vector<int>> corpus) {
  if (corpus.empty()) throw Error(Errc::EmptyCorpus, "co-occurrence needs at least one structure");
  CooccurrenceMatrix m;
  m.structure_count = corpus.size();
  for (const auto& entry : corpus) {
    std::vector<int> zs = entry;
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    for (int z : zs) {
      if (z < 1 || z > kMaxSupportedZ) throw Error(Errc::UnknownElement, "element Z=" + std::to_string(z));
    }
    for (int a : zs)
      for (int b : zs) ++m.at(a, b);
  }
  return m;
}

double chemical_similarity(int a, int b, const ChemFeatures& features) {
  const auto* fa = features.find(a);
  const auto* fb = features.find(b);
  if (fa == nullptr || fb == nullptr) {
    throw Error(Errc::UnknownElement, "no chemical features for Z=" + std::to_string(fa == nullptr ? a : b));
  }
  if (a == b) return 1.0;
  double dot = 0, na = 0, nb = 0;
  for (std::size_t c = 0; c < ChemFeatures::kWidth; ++c) {
    dot += (*fa)[c] * (*fb)[c];
    na += (*fa)[c] * (*fa)[c];
    nb += (*fb)[c] * (*fb)[c];
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

ClusterAssignment compute_clusters(const CooccurrenceMatrix& cooc, const ChemFeatures& features, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(Errc::InvalidArgument, "lambda must lie in [0, 1]");
  std::vector<int> corpus_elements;
  for (int z = 1; z <= kMaxSupportedZ; ++z) {
    if (cooc.at(z, z) > 0 && features.find(z) != nullptr) corpus_elements.push_back(z);
  }
  if (corpus_elements.size() < static_cast<std::size_t>(kClusterCount)) {
    throw Error(Errc::InsufficientElements, "corpus holds " + std::to_string(corpus_elements.size()) +
                                                " elements; at least 7 are needed");
  }
  std::vector<int> working = corpus_elements;
  for (const auto& [z, k] : kAnchors) {
    if (features.find(z) == nullptr) throw Error(Errc::UnknownElement, "anchor element lacks features");
    working.push_back(z);
  }
  std::sort(working.begin(), working.end());
  working.erase(std::unique(working.begin(), working.end()), working.end());

  const Objective obj(working, cooc, features, lambda);
  const std::size_t n = obj.size();
  std::vector<int> cluster(n, -1);
  for (const auto& [z, k] : kAnchors) cluster[obj.index_of(z)] = k;

  // Farthest-point seeds for clusters 5 and 6.
  for (int k = 5; k <= 6; ++k) {
    double best = -1;
    std::size_t pick = n;
    for (std::size_t a = 0; a < n; ++a) {
      if (cluster[a] >= 0) continue;
      double sum = 0;
      for (std::size_t b = 0; b < n; ++b)
        if (cluster[b] >= 0) sum += obj.hybrid_dissim(a, b);
      if (sum > best + 1e-12) {
        best = sum;
        pick = a;
      }
    }
    cluster[pick] = k;
  }

  for (std::size_t a = 0; a < n; ++a) {
    if (cluster[a] >= 0) continue;
    int best_k = 4;
    double best = -1e300;
    for (int k = 4; k <= 6; ++k) {
      const double s = obj.score(a, cluster, k);
      if (s > best + 1e-12) {
        best = s;
        best_k = k;
      }
    }
    cluster[a] = best_k;
  }

  // Improvement passes: single-element moves then pairwise exchanges among
  // clusters 4..6, accepted only on strict gain; Zn stays put.
  auto movable = [&](std::size_t a) { return cluster[a] >= 4 && obj.element(a) != kZn; };
  auto cluster_size = [&](int k) { return std::count(cluster.begin(), cluster.end(), k); };
  double current = obj.total(cluster);
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t a = 0; a < n; ++a) {
      if (!movable(a)) continue;
      for (int k = 4; k <= 6; ++k) {
        const int from = cluster[a];
        if (k == from || cluster_size(from) == 1) continue;
        cluster[a] = k;
        const double t = obj.total(cluster);
        if (t > current + 1e-12) {
          current = t;
          improved = true;
        } else {
          cluster[a] = from;
        }
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!movable(a) || !movable(b) || cluster[a] == cluster[b]) continue;
        std::swap(cluster[a], cluster[b]);
        const double t = obj.total(cluster);
        if (t > current + 1e-12) {
          current = t;
          improved = true;
        } else {
          std::swap(cluster[a], cluster[b]);
        }
      }
    }
  }

  ClusterAssignment out;
  out.lambda = lambda;
  out.anchors.assign(kAnchors.begin(), kAnchors.end());
  out.provenance = "computed from " + std::to_string(cooc.structure_count) + " structures, " +
                   std::to_string(corpus_elements.size()) + " elements";
  for (std::size_t a = 0; a < n; ++a) out.cluster_of[static_cast<std::size_t>(obj.element(a))] = cluster[a];

  // Elements never seen in the corpus join the non-singleton cluster they
  // resemble most chemically.
  for (int z : features.elements) {
    if (z > kMaxSupportedZ || out.contains(z)) continue;
    int best_k = 4;
    double best = -1e300;
    for (int k = 4; k <= 6; ++k) {
      double s = 0;
      int count = 0;
      for (std::size_t a = 0; a < n; ++a) {
        if (cluster[a] != k) continue;
        s += chemical_similarity(z, obj.element(a), features);
        ++count;
      }
      const double mean = count > 0 ? s / count : -1e300;
      if (mean > best + 1e-12) {
        best = mean;
        best_k = k;
      }
    }
    out.cluster_of[static_cast<std::size_t>(z)] = best_k;
  }
  return out;
}

double clustering_score(const ClusterAssignment& assignment, const CooccurrenceMatrix& cooc,
                        const ChemFeatures& features, double lambda) {
  std::vector<int> working;
  for (int z = 1; z <= kMaxSupportedZ; ++z) {
    if ((cooc.at(z, z) > 0 || z == kH || z == kC || z == kN || z == kO || z == kZn) && features.find(z) != nullptr)
      working.push_back(z);
  }
  const Objective obj(working, cooc, features, lambda);
  std::vector<int> cluster(obj.size());
  for (std::size_t a = 0; a < obj.size(); ++a) cluster[a] = assignment[obj.element(a)];
  return obj.total(cluster);
}

const ClusterAssignment& default_clusters() {
  static const ClusterAssignment table = [] {
    ClusterAssignment t;
    t.provenance = "builtin-fallback-v1";
    t.lambda = 0.5;
    t.anchors.assign(kAnchors.begin(), kAnchors.end());
    const std::set<std::string_view> metalloids_halogens{"B", "Si", "Ge", "As", "Sb", "Te",
                                                         "F", "Cl", "Br", "I",  "At"};
    for (const ElementData& e : element_table()) {
      int k;
      if (e.z == kH) k = 0;
      else if (e.z == kC) k = 1;
      else if (e.z == kN) k = 2;
      else if (e.z == kO) k = 3;
      else if (metalloids_halogens.contains(e.symbol)) k = 5;
      else if (e.block == Block::s && e.z != 2) k = 4;  // alkali and alkaline-earth metals
      else if (e.block == Block::d) k = 4;
      else if (e.symbol == "Al" || e.symbol == "Ga" || e.symbol == "In" || e.symbol == "Sn" || e.symbol == "Tl" ||
               e.symbol == "Pb" || e.symbol == "Bi" || e.symbol == "Po")
        k = 4;
      else k = 6;  // P, S, Se, noble gases, lanthanides and actinides
      t.cluster_of[static_cast<std::size_t>(e.z)] = k;
    }
    return t;
  }();
  return table;
}

std::string write_cluster_table(const ClusterAssignment& assignment) {
  std::string out = "# element cluster table\n";
  out += "# provenance: " + assignment.provenance + "\n";
  out += "# lambda: " + format_double(assignment.lambda) + "\n";
  out += "# anchors:";
  for (const auto& [z, k] : assignment.anchors) out += " " + std::string(element_symbol(z)) + "=" + std::to_string(k);
  out += "\n";
  for (int z = 1; z <= kMaxSupportedZ; ++z) {
    if (!assignment.contains(z)) continue;
    out += std::string(element_symbol(z)) + "\t" + std::to_string(assignment[z]) + "\n";
  }
  return out;
}

ClusterAssignment read_cluster_table(std::string_view text) {
  ClusterAssignment t;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.substr(1);
      auto value_of = [&](std::string_view key) -> std::optional<std::string> {
        const std::string prefix = " " + std::string(key) + ":";
        if (!body.starts_with(prefix)) return std::nullopt;
        std::string v = body.substr(prefix.size());
        while (!v.empty() && v.front() == ' ') v.erase(v.begin());
        return v;
      };
      if (auto v = value_of("provenance")) t.provenance = *v;
      if (auto v = value_of("lambda")) {
        double l = 0;
        const auto res = std::from_chars(v->data(), v->data() + v->size(), l);
        if (res.ec != std::errc()) throw Error(Errc::BadNumber, "bad lambda in cluster table");
        t.lambda = l;
      }
      if (auto v = value_of("anchors")) {
        std::istringstream items(*v);
        std::string item;
        while (items >> item) {
          const auto eq = item.find('=');
          const auto z = atomic_number(item.substr(0, eq));
          if (eq == std::string::npos || !z) throw Error(Errc::InvalidArgument, "bad anchor '" + item + "'");
          t.anchors.emplace_back(*z, std::stoi(item.substr(eq + 1)));
        }
      }
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(Errc::InvalidArgument, "cluster table line " + std::to_string(line_no) + " lacks a tab");
    }
    const auto z = atomic_number(line.substr(0, tab));
    if (!z || *z > kMaxSupportedZ) throw Error(Errc::UnknownElement, "cluster table line " + std::to_string(line_no));
    int k = -1;
    const std::string id = line.substr(tab + 1);
    const auto res = std::from_chars(id.data(), id.data() + id.size(), k);
    if (res.ec != std::errc() || res.ptr != id.data() + id.size() || k < 0 || k >= kClusterCount) {
      throw Error(Errc::InvalidArgument, "cluster table line " + std::to_string(line_no) + " has a bad cluster id");
    }
    t.cluster_of[static_cast<std::size_t>(*z)] = k;
  }
  t.validate();
  return t;
}

}  // namespace itt
