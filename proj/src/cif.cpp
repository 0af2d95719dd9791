#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "itt/elements.hpp"
#include "itt/error.hpp"
#include "itt/structure.hpp"
#include "internal/dedup.hpp"

namespace itt {
namespace {

struct Loop {
  std::vector<std::string> tags;
  std::vector<std::vector<std::string>> rows;

  int column(std::string_view tag) const {
    for (std::size_t i = 0; i < tags.size(); ++i) {
      if (tags[i] == tag) return static_cast<int>(i);
    }
    return -1;
  }
};

struct DataBlock {
  std::string name;
  std::map<std::string, std::string> items;
  std::vector<Loop> loops;

  const Loop* loop_with(std::string_view tag) const {
    for (const Loop& l : loops) {
      if (l.column(tag) >= 0) return &l;
    }
    return nullptr;
  }
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Splits CIF text into tokens: bare words, quoted strings, and
// semicolon-delimited text fields; comments are dropped.
std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  bool line_start = true;
  while (i < n) {
    const char c = text[i];
    if (c == '\n' || c == '\r') {
      line_start = true;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t') {
      line_start = false;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    if (c == ';' && line_start) {
      // Text field runs to the next line beginning with ';'.
      std::size_t end = i + 1;
      std::string field;
      while (end < n) {
        if ((text[end - 1] == '\n') && text[end] == ';') break;
        ++end;
      }
      field.assign(text.substr(i + 1, end - i - 1));
      while (!field.empty() && (field.back() == '\n' || field.back() == '\r')) field.pop_back();
      tokens.push_back(std::move(field));
      i = end + 1;
      line_start = false;
      continue;
    }
    line_start = false;
    if (c == '\'' || c == '"') {
      // A quote closes only when followed by whitespace or end of input.
      std::size_t end = i + 1;
      while (end < n) {
        if (text[end] == c && (end + 1 == n || std::isspace(static_cast<unsigned char>(text[end + 1])))) break;
        if (text[end] == '\n') break;
        ++end;
      }
      tokens.emplace_back(text.substr(i + 1, end - i - 1));
      i = end + 1;
      continue;
    }
    std::size_t end = i;
    while (end < n && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    tokens.emplace_back(text.substr(i, end - i));
    i = end;
  }
  return tokens;
}

bool is_keyword(const std::string& tok) {
  const std::string l = lower(tok);
  return l == "loop_" || l.starts_with("data_") || l.starts_with("save_") || l == "global_" || l == "stop_";
}

DataBlock parse_first_block(std::string_view text) {
  const auto tokens = tokenize(text);
  DataBlock block;
  bool in_block = false;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::string& tok = tokens[i];
    const std::string l = lower(tok);
    if (l.starts_with("data_")) {
      if (in_block) break;  // only the first block is read
      in_block = true;
      block.name = tok.substr(5);
      ++i;
    } else if (l == "loop_") {
      Loop loop;
      ++i;
      while (i < tokens.size() && tokens[i].starts_with("_")) loop.tags.push_back(lower(tokens[i++]));
      std::vector<std::string> values;
      while (i < tokens.size() && !tokens[i].starts_with("_") && !is_keyword(tokens[i])) values.push_back(tokens[i++]);
      if (!loop.tags.empty()) {
        for (std::size_t k = 0; k + loop.tags.size() <= values.size(); k += loop.tags.size()) {
          loop.rows.emplace_back(values.begin() + static_cast<std::ptrdiff_t>(k),
                                 values.begin() + static_cast<std::ptrdiff_t>(k + loop.tags.size()));
        }
        block.loops.push_back(std::move(loop));
      }
    } else if (tok.starts_with("_")) {
      if (i + 1 < tokens.size() && !tokens[i + 1].starts_with("_") && !is_keyword(tokens[i + 1])) {
        block.items[l] = tokens[i + 1];
        i += 2;
      } else {
        ++i;
      }
    } else {
      ++i;
    }
  }
  return block;
}

// Parses a CIF number, dropping a trailing standard uncertainty "(esd)".
std::optional<double> parse_number(std::string_view tok) {
  if (tok == "?" || tok == ".") return std::nullopt;
  std::string_view body = tok;
  if (const auto open = body.find('('); open != std::string_view::npos) {
    if (body.back() != ')') throw Error(Errc::BadNumber, "malformed number '" + std::string(tok) + "'");
    for (std::size_t k = open + 1; k + 1 < body.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(body[k]))) {
        throw Error(Errc::BadNumber, "malformed uncertainty in '" + std::string(tok) + "'");
      }
    }
    body = body.substr(0, open);
  }
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (body.empty() || ec != std::errc() || ptr != body.data() + body.size() || !std::isfinite(value)) {
    throw Error(Errc::BadNumber, "malformed number '" + std::string(tok) + "'");
  }
  return value;
}

// Affine map on fractional coordinates: x' = rotation * x + translation.
struct SymOp {
  Mat3 rotation;
  Vec3 translation;
};

SymOp parse_symop(std::string_view text) {
  SymOp op;
  std::array<std::string, 3> parts;
  std::size_t part = 0;
  for (char c : text) {
    if (c == ',') {
      if (++part > 2) throw Error(Errc::BadSymop, "too many components in '" + std::string(text) + "'");
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      parts[part] += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (part != 2) throw Error(Errc::BadSymop, "expected three components in '" + std::string(text) + "'");

  for (int row = 0; row < 3; ++row) {
    const std::string& expr = parts[static_cast<std::size_t>(row)];
    if (expr.empty()) throw Error(Errc::BadSymop, "empty component in '" + std::string(text) + "'");
    std::size_t i = 0;
    while (i < expr.size()) {
      double sign = 1.0;
      if (expr[i] == '+' || expr[i] == '-') {
        sign = expr[i] == '-' ? -1.0 : 1.0;
        ++i;
      }
      if (i >= expr.size()) throw Error(Errc::BadSymop, "dangling sign in '" + std::string(text) + "'");
      double coeff = 1.0;
      bool has_number = false;
      if (std::isdigit(static_cast<unsigned char>(expr[i])) || expr[i] == '.') {
        std::size_t j = i;
        while (j < expr.size() && (std::isdigit(static_cast<unsigned char>(expr[j])) || expr[j] == '.')) ++j;
        double num = 0;
        auto res = std::from_chars(expr.data() + i, expr.data() + j, num);
        if (res.ec != std::errc() || res.ptr != expr.data() + j) {
          throw Error(Errc::BadSymop, "bad number in '" + std::string(text) + "'");
        }
        if (j < expr.size() && expr[j] == '/') {
          std::size_t k = j + 1;
          while (k < expr.size() && std::isdigit(static_cast<unsigned char>(expr[k]))) ++k;
          double den = 0;
          res = std::from_chars(expr.data() + j + 1, expr.data() + k, den);
          if (res.ec != std::errc() || k == j + 1 || den == 0.0) {
            throw Error(Errc::BadSymop, "bad fraction in '" + std::string(text) + "'");
          }
          num /= den;
          j = k;
        }
        coeff = num;
        has_number = true;
        i = j;
        if (i < expr.size() && expr[i] == '*') ++i;
      }
      if (i < expr.size() && (expr[i] == 'x' || expr[i] == 'y' || expr[i] == 'z')) {
        op.rotation[row][expr[i] - 'x'] += sign * coeff;
        ++i;
      } else if (has_number) {
        op.translation[row] += sign * coeff;
      } else {
        throw Error(Errc::BadSymop, "unexpected character in '" + std::string(text) + "'");
      }
    }
  }
  if (std::abs(op.rotation.determinant()) < 0.5) {
    throw Error(Errc::BadSymop, "singular operation '" + std::string(text) + "'");
  }
  return op;
}

int element_from_label(std::string_view raw, bool type_symbol) {
  // Type symbols look like "Zn", "Zn2+", "O2-"; labels like "C12", "Cl3a".
  std::string letters;
  for (char c : raw) {
    if (!std::isalpha(static_cast<unsigned char>(c))) break;
    letters += c;
  }
  if (letters.empty()) throw Error(Errc::UnknownElement, "cannot read an element from '" + std::string(raw) + "'");
  if (letters.size() >= 2) {
    if (auto z = atomic_number(letters.substr(0, 2))) {
      // In labels a lowercase second letter belongs to the symbol ("Cl1"),
      // an uppercase one usually does not ("CA1" is carbon alpha).
      if (type_symbol || std::islower(static_cast<unsigned char>(letters[1]))) return *z;
    }
  }
  if (auto z = atomic_number(letters.substr(0, 1))) return *z;
  throw Error(Errc::UnknownElement, "unknown element in '" + std::string(raw) + "'");
}

}  // namespace

Structure parse_cif(std::string_view text, Warnings* warnings) {
  const DataBlock block = parse_first_block(text);
  auto warn = [&](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };

  std::array<double, 6> cell{};
  const std::array<std::string_view, 6> cell_tags{"_cell_length_a", "_cell_length_b", "_cell_length_c",
                                                   "_cell_angle_alpha", "_cell_angle_beta", "_cell_angle_gamma"};
  for (std::size_t k = 0; k < 6; ++k) {
    const auto it = block.items.find(std::string(cell_tags[k]));
    std::optional<double> value;
    if (it != block.items.end()) value = parse_number(it->second);
    if (!value) {
      if (k < 3) throw Error(Errc::MissingCell, "missing " + std::string(cell_tags[k]));
      warn("missing " + std::string(cell_tags[k]) + ", assuming 90 degrees");
      value = 90.0;
    }
    cell[k] = *value;
  }
  Structure s;
  s.source_id = block.name;
  s.lattice = Lattice::from_parameters(cell[0], cell[1], cell[2], cell[3], cell[4], cell[5]);
  try {
    s.lattice.validate();
  } catch (const Error& e) {
    throw Error(Errc::MissingCell, e.what());
  }

  std::vector<SymOp> ops;
  for (std::string_view tag : {"_symmetry_equiv_pos_as_xyz", "_space_group_symop_operation_xyz"}) {
    if (const Loop* loop = block.loop_with(tag)) {
      const int col = loop->column(tag);
      for (const auto& row : loop->rows) ops.push_back(parse_symop(row[static_cast<std::size_t>(col)]));
      break;
    }
    if (const auto it = block.items.find(std::string(tag)); it != block.items.end()) {
      ops.push_back(parse_symop(it->second));
      break;
    }
  }
  if (ops.empty()) ops.push_back(parse_symop("x,y,z"));

  const Loop* atoms = block.loop_with("_atom_site_fract_x");
  if (atoms == nullptr || atoms->column("_atom_site_fract_y") < 0 || atoms->column("_atom_site_fract_z") < 0) {
    throw Error(Errc::MissingAtoms, "no fractional atom-site loop");
  }
  const int cx = atoms->column("_atom_site_fract_x");
  const int cy = atoms->column("_atom_site_fract_y");
  const int cz = atoms->column("_atom_site_fract_z");
  const int ctype = atoms->column("_atom_site_type_symbol");
  const int clabel = atoms->column("_atom_site_label");
  if (ctype < 0 && clabel < 0) throw Error(Errc::MissingAtoms, "atom-site loop has neither type symbols nor labels");
  if (atoms->column("_atom_site_occupancy") >= 0) warn("occupancy column ignored; sites treated as fully occupied");
  if (atoms->column("_atom_site_disorder_group") >= 0 || atoms->column("_atom_site_disorder_assembly") >= 0) {
    warn("disorder tags ignored");
  }

  constexpr double kMergeTol = 0.1;
  SiteDeduplicator dedup(s.lattice, kMergeTol);
  for (const auto& row : atoms->rows) {
    const int z = ctype >= 0 ? element_from_label(row[static_cast<std::size_t>(ctype)], true)
                             : element_from_label(row[static_cast<std::size_t>(clabel)], false);
    const auto fx = parse_number(row[static_cast<std::size_t>(cx)]);
    const auto fy = parse_number(row[static_cast<std::size_t>(cy)]);
    const auto fz = parse_number(row[static_cast<std::size_t>(cz)]);
    if (!fx || !fy || !fz) throw Error(Errc::BadNumber, "missing fractional coordinate");
    if (z > kMaxSupportedZ) {
      warn("dropping site with unsupported element Z=" + std::to_string(z));
      continue;
    }
    const Vec3 frac{*fx, *fy, *fz};
    for (const SymOp& op : ops) {
      dedup.insert(s.sites, make_site(s.lattice, z, op.rotation * frac + op.translation));
    }
  }
  if (s.sites.empty()) throw Error(Errc::MissingAtoms, "no supported atom sites");
  return s;
}

std::string write_cif(const Structure& s) {
  const auto len = s.lattice.lengths();
  const auto ang = s.lattice.angles();
  std::string out;
  char buf[256];
  out += "data_" + (s.source_id.empty() ? std::string("structure") : s.source_id) + "\n";
  const std::array<const char*, 6> tags{"_cell_length_a", "_cell_length_b", "_cell_length_c",
                                        "_cell_angle_alpha", "_cell_angle_beta", "_cell_angle_gamma"};
  const std::array<double, 6> values{len[0], len[1], len[2], ang[0], ang[1], ang[2]};
  for (std::size_t k = 0; k < 6; ++k) {
    std::snprintf(buf, sizeof buf, "%s %.17g\n", tags[k], values[k]);
    out += buf;
  }
  out += "_symmetry_space_group_name_H-M 'P 1'\nloop_\n_symmetry_equiv_pos_as_xyz\n'x, y, z'\n";
  out += "loop_\n_atom_site_label\n_atom_site_type_symbol\n_atom_site_fract_x\n_atom_site_fract_y\n_atom_site_fract_z\n";
  std::size_t index = 0;
  for (const Site& site : s.sites) {
    const std::string_view sym = element_symbol(site.z);
    std::snprintf(buf, sizeof buf, "%.*s%zu %.*s %.17g %.17g %.17g\n", static_cast<int>(sym.size()), sym.data(),
                  ++index, static_cast<int>(sym.size()), sym.data(), site.frac.x, site.frac.y, site.frac.z);
    out += buf;
  }
  return out;
}

}  // namespace itt
