#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "itt/elements.hpp"
#include "itt/error.hpp"
#include "itt/structure.hpp"
#include "internal/dedup.hpp"

namespace itt {
namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double to_double(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error(Errc::BadNumber, "malformed number '" + std::string(tok) + "'");
  }
  return v;
}

// Value of key="..." in an extended-XYZ comment line (key matched without case).
std::optional<std::string_view> quoted_value(std::string_view line, std::string_view key) {
  std::string lowered(line);
  for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const std::string needle = std::string(key) + "=\"";
  std::size_t pos = 0;
  while ((pos = lowered.find(needle, pos)) != std::string::npos) {
    if (pos == 0 || std::isspace(static_cast<unsigned char>(lowered[pos - 1]))) {
      const std::size_t begin = pos + needle.size();
      const std::size_t end = line.find('"', begin);
      if (end == std::string_view::npos) return std::nullopt;
      return line.substr(begin, end - begin);
    }
    pos += needle.size();
  }
  return std::nullopt;
}

int species_to_z(std::string_view tok) {
  if (!tok.empty() && std::isdigit(static_cast<unsigned char>(tok.front()))) {
    int z = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), z);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw Error(Errc::BadNumber, "malformed atomic number '" + std::string(tok) + "'");
    }
    return z;
  }
  if (auto z = atomic_number(tok)) return *z;
  throw Error(Errc::UnknownElement, "unknown species '" + std::string(tok) + "'");
}

}  // namespace

Structure parse_xyz(std::string_view text, Warnings* warnings) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw Error(Errc::CountMismatch, "missing count or comment line");
  const auto count_tokens = split_ws(lines[0]);
  if (count_tokens.size() != 1) throw Error(Errc::BadNumber, "first line must hold the atom count");
  std::size_t declared = 0;
  {
    const auto tok = count_tokens[0];
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), declared);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw Error(Errc::BadNumber, "malformed atom count '" + std::string(tok) + "'");
    }
  }

  const auto lattice_text = quoted_value(lines[1], "lattice");
  if (!lattice_text) throw Error(Errc::MissingLattice, "comment line has no Lattice=\"...\" entry");
  const auto lattice_tokens = split_ws(*lattice_text);
  if (lattice_tokens.size() != 9) throw Error(Errc::MissingLattice, "Lattice entry must hold nine numbers");
  Structure s;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) s.lattice.vectors[r][c] = to_double(lattice_tokens[static_cast<std::size_t>(3 * r + c)]);
  }
  if (const auto origin_text = quoted_value(lines[1], "origin")) {
    const auto toks = split_ws(*origin_text);
    if (toks.size() != 3) throw Error(Errc::BadNumber, "Origin entry must hold three numbers");
    s.lattice.origin = {to_double(toks[0]), to_double(toks[1]), to_double(toks[2])};
  }
  try {
    s.lattice.validate();
  } catch (const Error& e) {
    throw Error(Errc::MissingLattice, e.what());
  }

  std::vector<std::string_view> atom_lines;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    if (!split_ws(lines[i]).empty()) atom_lines.push_back(lines[i]);
  }
  if (atom_lines.size() != declared) {
    throw Error(Errc::CountMismatch, "declared " + std::to_string(declared) + " atoms, found " +
                                         std::to_string(atom_lines.size()));
  }
  if (declared == 0) throw Error(Errc::MissingAtoms, "structure has no atoms");

  SiteDeduplicator dedup(s.lattice, 0.1);
  for (std::string_view line : atom_lines) {
    const auto toks = split_ws(line);
    if (toks.size() < 4) throw Error(Errc::BadNumber, "atom line needs species and three coordinates");
    const int z = species_to_z(toks[0]);
    const Vec3 cart{to_double(toks[1]), to_double(toks[2]), to_double(toks[3])};
    if (z < 1) throw Error(Errc::UnknownElement, "atomic number must be positive");
    if (z > kMaxSupportedZ) {
      if (warnings) warnings->push_back("dropping atom with unsupported element Z=" + std::to_string(z));
      continue;
    }
    if (!dedup.insert(s.sites, make_site(s.lattice, z, s.lattice.to_fractional(cart))) && warnings) {
      warnings->push_back("merged atom within 0.1 Å of an earlier atom");
    }
  }
  if (s.sites.empty()) throw Error(Errc::MissingAtoms, "no supported atoms");
  return s;
}

std::string write_xyz(const Structure& s) {
  std::string out = std::to_string(s.sites.size()) + "\n";
  char buf[512];
  const Mat3& m = s.lattice.vectors;
  std::snprintf(buf, sizeof buf,
                "Lattice=\"%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\" Origin=\"%.17g %.17g %.17g\" "
                "Properties=species:S:1:pos:R:3",
                m[0].x, m[0].y, m[0].z, m[1].x, m[1].y, m[1].z, m[2].x, m[2].y, m[2].z, s.lattice.origin.x,
                s.lattice.origin.y, s.lattice.origin.z);
  out += buf;
  out += "\n";
  for (const Site& site : s.sites) {
    const std::string_view sym = element_symbol(site.z);
    std::snprintf(buf, sizeof buf, "%.*s %.17g %.17g %.17g\n", static_cast<int>(sym.size()), sym.data(), site.cart.x,
                  site.cart.y, site.cart.z);
    out += buf;
  }
  return out;
}

Structure read_structure_file(const std::filesystem::path& path, Warnings* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  Structure s;
  if (ext == ".cif") {
    s = parse_cif(text, warnings);
  } else if (ext == ".xyz" || ext == ".extxyz") {
    s = parse_xyz(text, warnings);
  } else {
    throw Error(Errc::IoError, "unsupported file type '" + ext + "' for " + path.string());
  }
  s.source_id = path.stem().string();
  return s;
}

}  // namespace itt
