#include "cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "cli/svg.hpp"
#include "itt/error.hpp"
#include "itt/featurize.hpp"

namespace fs = std::filesystem;

namespace itt::cli {
namespace {

struct RunConfig {
  FeaturizeConfig featurize;
  std::string mode = "centered";
  std::string clusters_path;
  int jobs = 1;
  std::string out;
};

void add_common(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--grid-start", rc.featurize.grid.start, "First grid point in angstrom")->capture_default_str();
  cmd->add_option("--grid-step", rc.featurize.grid.step, "Grid spacing in angstrom")->capture_default_str();
  cmd->add_option("--grid-count", rc.featurize.grid.count, "Number of grid points")->capture_default_str();
  cmd->add_option("--supercell-edge", rc.featurize.supercell_edge, "Supercell target edge in angstrom")
      ->capture_default_str();
  cmd->add_option("--mode", rc.mode, "Interaction mode: centered or symmetric")->capture_default_str();
  cmd->add_option("--clusters", rc.clusters_path, "Cluster table (default: $ITT_CLUSTERS or built-in)");
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error(Errc::IoError, "cannot write " + p.string());
}

// Flag checks shared by featurize and barcode; throws InvalidArgument.
ClusterAssignment finish_config(RunConfig& rc) {
  rc.featurize.mode = parse_mode(rc.mode);
  if (rc.jobs < 1) throw Error(Errc::InvalidArgument, "--jobs must be at least 1");
  rc.featurize.validate();
  std::string path = rc.clusters_path;
  if (path.empty())
    if (const char* env = std::getenv("ITT_CLUSTERS")) path = env;
  if (path.empty()) return default_clusters();
  try {
    ClusterAssignment c = read_cluster_table(read_text(path));
    c.validate();
    return c;
  } catch (const Error& e) {
    throw Error(Errc::InvalidArgument, "cluster table " + path + ": " + e.what());
  }
}

bool is_structure_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".cif" || ext == ".xyz" || ext == ".extxyz";
}

std::vector<fs::path> structure_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && is_structure_file(entry.path())) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

// Runs task(i) for i in [0, n) on up to `jobs` threads pulling from a shared counter.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) task(i);
  };
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  if (count <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

int cmd_featurize(RunConfig& rc, const std::vector<std::string>& inputs, std::ostream& out, std::ostream& err) {
  ClusterAssignment clusters;
  try {
    clusters = finish_config(rc);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  }
  std::vector<fs::path> files;
  bool batch = inputs.size() > 1;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      batch = true;
      const auto found = structure_files(p);
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      files.push_back(p);
    } else {
      err << "error: " << in << ": no such file or directory\n";
      return kFailure;
    }
  }
  if (files.empty()) {
    err << "error: no structure files found\n";
    return kFailure;
  }

  // One file uses the job budget for its own topology tasks.
  FeaturizeConfig config = rc.featurize;
  if (files.size() == 1) config.threads = rc.jobs;
  std::vector<std::string> lines(files.size()), errors(files.size());
  std::vector<char> ok(files.size(), 0);
  parallel_for(files.size(), files.size() == 1 ? 1 : rc.jobs, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Warnings warnings;
      const Structure s = read_structure_file(files[i], &warnings);
      const EmbeddingBundle b = featurize_structure(s, clusters, config);
      write_bundle(b, fs::path(rc.out) / s.source_id);
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      lines[i] = s.source_id + "\tatoms=" + std::to_string(b.meta.atom_count) +
                 "\tsupercell_atoms=" + std::to_string(b.meta.supercell_atom_count) +
                 "\tunique_atoms=" + std::to_string(b.atomic.unique_count) + "\ttime=" + seconds(dt) + "s";
      for (const auto& w : warnings) errors[i] += "warning: " + files[i].string() + ": " + w + "\n";
      ok[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = "error: " + files[i].string() + ": " + e.what() + "\n";
    }
  });

  std::size_t failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    err << errors[i];
    if (ok[i])
      out << lines[i] << "\n";
    else
      ++failed;
  }
  if (failed == 0) return kOk;
  return batch ? kPartialFailure : kFailure;
}

struct Level {
  enum Kind { structural, elemental, interaction } kind = structural;
  int a = 0, b = 0;
};

Level parse_level(const std::string& text) {
  auto cluster_id = [&](std::string_view s) {
    if (s.size() != 1 || s[0] < '0' || s[0] > '6') throw Error(Errc::InvalidArgument, "bad level '" + text + "'");
    return s[0] - '0';
  };
  if (text == "structural") return {};
  if (text.starts_with("elemental:")) return {Level::elemental, cluster_id(std::string_view(text).substr(10)), 0};
  if (text.starts_with("interaction:")) {
    const std::string_view rest = std::string_view(text).substr(12);
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos) throw Error(Errc::InvalidArgument, "bad level '" + text + "'");
    Level l{Level::interaction, cluster_id(rest.substr(0, comma)), cluster_id(rest.substr(comma + 1))};
    if (l.a == l.b) throw Error(Errc::InvalidArgument, "interaction level needs two different clusters");
    return l;
  }
  throw Error(Errc::InvalidArgument, "bad level '" + text + "'");
}

int cmd_barcode(RunConfig& rc, const std::string& input, const std::string& level_text, const std::string& format,
                std::ostream& out, std::ostream& err) {
  ClusterAssignment clusters;
  Level level;
  try {
    clusters = finish_config(rc);
    level = parse_level(level_text);
    if (format != "csv" && format != "svg") throw Error(Errc::InvalidArgument, "--format must be csv or svg");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  }
  try {
    const Structure s = read_structure_file(input);
    const FeaturizeConfig& config = rc.featurize;
    const PreparedStructure prep = prepare_structure(s, clusters, config);
    Barcode b;
    std::string title = s.source_id + " " + level_text;
    if (level.kind == Level::structural) {
      b = reduce(alpha_filtration(prep.points, config.max_value, prep.jitter_frame), 2);
    } else if (level.kind == Level::elemental) {
      const auto& pts = prep.cluster_points[static_cast<std::size_t>(level.a)];
      if (pts.empty()) {
        err << "warning: cluster " << level.a << " is absent from " << s.source_id << "\n";
      } else {
        b = reduce(alpha_filtration(pts, config.max_value, prep.jitter_frame), 2);
      }
    } else {
      b.max_dim = 1;
      const auto& center = prep.cluster_points[static_cast<std::size_t>(level.a)];
      const auto& partner = prep.cluster_points[static_cast<std::size_t>(level.b)];
      if (center.empty() || partner.empty()) {
        err << "warning: cluster " << (center.empty() ? level.a : level.b) << " is absent from " << s.source_id
            << "\n";
      } else {
        b = interaction_barcode(center, partner, config.mode, config.max_value, prep.jitter_frame, 1);
      }
      title += " (" + std::string(mode_name(config.mode)) + ")";
    }
    const std::string text =
        format == "csv" ? barcode_csv(b) : svg::barcode(b, title, config.grid.point(config.grid.count - 1));
    if (rc.out.empty())
      out << text;
    else
      write_text(rc.out, text);
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << input << ": " << e.what() << "\n";
    return kFailure;
  }
}

struct Corpus {
  std::vector<Structure> structures;
  std::size_t skipped = 0;
};

// Parses every structure file in dir; unreadable files are skipped with a warning.
Corpus load_corpus(const std::string& dir, std::ostream& err) {
  if (!fs::is_directory(dir)) throw Error(Errc::IoError, dir + " is not a directory");
  Corpus c;
  for (const auto& f : structure_files(dir)) {
    try {
      c.structures.push_back(read_structure_file(f));
    } catch (const std::exception& e) {
      err << "warning: skipping " << f.string() << ": " << e.what() << "\n";
      ++c.skipped;
    }
  }
  if (c.structures.empty()) throw Error(Errc::EmptyCorpus, "no readable structures in " + dir);
  return c;
}

std::vector<int> element_set(const Structure& s) {
  std::set<int> zs;
  for (const auto& site : s.sites) zs.insert(site.z);
  return {zs.begin(), zs.end()};
}

int cmd_cluster(const std::string& corpus_dir, double lambda, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    err << "error: --lambda must lie in [0, 1]\n";
    return kBadConfig;
  }
  Corpus corpus;
  try {
    corpus = load_corpus(corpus_dir, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  std::vector<std::vector<int>> sets;
  for (const auto& s : corpus.structures) sets.push_back(element_set(s));
  try {
    const ClusterAssignment a = compute_clusters(cooccurrence_matrix(sets), default_features(), lambda);
    const std::string table = write_cluster_table(a);
    if (out_path.empty())
      out << table;
    else
      write_text(out_path, table);
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::InsufficientElements ? kBadConfig : kFailure;
  }
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

int cmd_stats(RunConfig& rc, const std::string& corpus_dir, std::ostream& out, std::ostream& err) {
  ClusterAssignment clusters;
  try {
    clusters = finish_config(rc);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  }
  Corpus corpus;
  try {
    corpus = load_corpus(corpus_dir, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  std::map<std::size_t, std::size_t> histogram;
  std::array<std::array<std::size_t, kClusterCount>, kClusterCount> together{};
  std::size_t distinct = 0;
  for (const auto& s : corpus.structures) {
    ++histogram[unique_atoms(s, clusters, rc.featurize.neighbor_cutoff).unique_count];
    const auto zs = element_set(s);
    std::set<int> ids;
    for (int z : zs) ids.insert(clusters[z]);
    if (ids.size() == zs.size()) ++distinct;
    for (int i : ids)
      for (int j : ids) ++together[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  const double n = static_cast<double>(corpus.structures.size());
  const double fraction = static_cast<double>(distinct) / n;

  std::string hist_csv = "unique_atoms,structures\n";
  for (const auto& [k, c] : histogram) hist_csv += std::to_string(k) + "," + std::to_string(c) + "\n";
  std::vector<std::vector<double>> pct(kClusterCount, std::vector<double>(kClusterCount));
  std::vector<std::string> labels;
  std::string matrix_csv = "cluster";
  for (int i = 0; i < kClusterCount; ++i) {
    labels.push_back("C" + std::to_string(i));
    matrix_csv += ",C" + std::to_string(i);
  }
  matrix_csv += "\n";
  for (std::size_t i = 0; i < kClusterCount; ++i) {
    matrix_csv += labels[i];
    for (std::size_t j = 0; j < kClusterCount; ++j) {
      pct[i][j] = 100.0 * static_cast<double>(together[i][j]) / n;
      matrix_csv += "," + percent(pct[i][j]);
    }
    matrix_csv += "\n";
  }
  const std::string summary = "structures," + std::to_string(corpus.structures.size()) + "\nskipped," +
                              std::to_string(corpus.skipped) + "\ndistinct_cluster_fraction," + percent(fraction) +
                              "\n";
  try {
    const fs::path dir = rc.out.empty() ? fs::path(".") : fs::path(rc.out);
    write_text(dir / "unique_atoms_histogram.csv", hist_csv);
    write_text(dir / "cluster_cooccurrence.csv", matrix_csv);
    write_text(dir / "summary.csv", summary);
    write_text(dir / "unique_atoms_histogram.svg",
               svg::histogram(histogram, "Unique atoms per structure", "unique atoms"));
    write_text(dir / "cluster_cooccurrence.svg", svg::heatmap(pct, labels, "Cluster co-occurrence (%)"));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  out << summary;
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topological featurization of porous crystals", "itt"};
  app.require_subcommand(1);

  RunConfig feat_rc;
  std::vector<std::string> feat_inputs;
  auto* feat = app.add_subcommand("featurize", "Write one embedding bundle per structure");
  feat->add_option("inputs", feat_inputs, "Structure files or directories")->required();
  feat->add_option("--out", feat_rc.out, "Output root")->required();
  feat->add_option("--jobs", feat_rc.jobs, "Worker threads")->capture_default_str();
  add_common(feat, feat_rc);

  RunConfig bar_rc;
  std::string bar_input, bar_level = "structural", bar_format = "csv";
  auto* bar = app.add_subcommand("barcode", "Print one persistence barcode");
  bar->add_option("input", bar_input, "Structure file")->required();
  bar->add_option("--level", bar_level, "structural | elemental:k | interaction:i,j")->capture_default_str();
  bar->add_option("--format", bar_format, "csv or svg")->capture_default_str();
  bar->add_option("--out", bar_rc.out, "Output file (default: standard output)");
  add_common(bar, bar_rc);

  std::string cl_corpus, cl_out;
  double cl_lambda = 0.5;
  auto* cl = app.add_subcommand("cluster", "Compute an element cluster table from a corpus");
  cl->add_option("corpus", cl_corpus, "Directory of structure files")->required();
  cl->add_option("--lambda", cl_lambda, "Weight of chemical similarity")->capture_default_str();
  cl->add_option("--out", cl_out, "Output file (default: standard output)");

  RunConfig st_rc;
  std::string st_corpus;
  auto* st = app.add_subcommand("stats", "Corpus statistics and plots");
  st->add_option("corpus", st_corpus, "Directory of structure files")->required();
  st->add_option("--out", st_rc.out, "Output directory (default: current directory)");
  st->add_option("--clusters", st_rc.clusters_path, "Cluster table (default: $ITT_CLUSTERS or built-in)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadConfig;
  }

  if (feat->parsed()) return cmd_featurize(feat_rc, feat_inputs, out, err);
  if (bar->parsed()) return cmd_barcode(bar_rc, bar_input, bar_level, bar_format, out, err);
  if (cl->parsed()) return cmd_cluster(cl_corpus, cl_lambda, cl_out, out, err);
  return cmd_stats(st_rc, st_corpus, out, err);
}

}  // namespace itt::cli
