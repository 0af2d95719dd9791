#include "itt/elements.hpp"

#include <array>
#include <cctype>
#include <string>

#include "itt/error.hpp"

namespace itt {
namespace {

// Valence electrons: s-block group, p-block group-10, d-block group with
// filled-shell groups 11/12 counted as 1/2, f-block 3.
constexpr std::array<ElementData, kMaxSupportedZ> kTable{{
    {1, "H", 1, Block::s, 2.20, 1, 31},
    {2, "He", 18, Block::s, 4.16, 2, 28},
    {3, "Li", 1, Block::s, 0.98, 1, 128},
    {4, "Be", 2, Block::s, 1.57, 2, 96},
    {5, "B", 13, Block::p, 2.04, 3, 84},
    {6, "C", 14, Block::p, 2.55, 4, 76},
    {7, "N", 15, Block::p, 3.04, 5, 71},
    {8, "O", 16, Block::p, 3.44, 6, 66},
    {9, "F", 17, Block::p, 3.98, 7, 57},
    {10, "Ne", 18, Block::p, 4.79, 8, 58},
    {11, "Na", 1, Block::s, 0.93, 1, 166},
    {12, "Mg", 2, Block::s, 1.31, 2, 141},
    {13, "Al", 13, Block::p, 1.61, 3, 121},
    {14, "Si", 14, Block::p, 1.90, 4, 111},
    {15, "P", 15, Block::p, 2.19, 5, 107},
    {16, "S", 16, Block::p, 2.58, 6, 105},
    {17, "Cl", 17, Block::p, 3.16, 7, 102},
    {18, "Ar", 18, Block::p, 3.24, 8, 106},
    {19, "K", 1, Block::s, 0.82, 1, 203},
    {20, "Ca", 2, Block::s, 1.00, 2, 176},
    {21, "Sc", 3, Block::d, 1.36, 3, 170},
    {22, "Ti", 4, Block::d, 1.54, 4, 160},
    {23, "V", 5, Block::d, 1.63, 5, 153},
    {24, "Cr", 6, Block::d, 1.66, 6, 139},
    {25, "Mn", 7, Block::d, 1.55, 7, 139},
    {26, "Fe", 8, Block::d, 1.83, 8, 132},
    {27, "Co", 9, Block::d, 1.88, 9, 126},
    {28, "Ni", 10, Block::d, 1.91, 10, 124},
    {29, "Cu", 11, Block::d, 1.90, 1, 132},
    {30, "Zn", 12, Block::d, 1.65, 2, 122},
    {31, "Ga", 13, Block::p, 1.81, 3, 122},
    {32, "Ge", 14, Block::p, 2.01, 4, 120},
    {33, "As", 15, Block::p, 2.18, 5, 119},
    {34, "Se", 16, Block::p, 2.55, 6, 120},
    {35, "Br", 17, Block::p, 2.96, 7, 120},
    {36, "Kr", 18, Block::p, 3.00, 8, 116},
    {37, "Rb", 1, Block::s, 0.82, 1, 220},
    {38, "Sr", 2, Block::s, 0.95, 2, 195},
    {39, "Y", 3, Block::d, 1.22, 3, 190},
    {40, "Zr", 4, Block::d, 1.33, 4, 175},
    {41, "Nb", 5, Block::d, 1.60, 5, 164},
    {42, "Mo", 6, Block::d, 2.16, 6, 154},
    {43, "Tc", 7, Block::d, 1.90, 7, 147},
    {44, "Ru", 8, Block::d, 2.20, 8, 146},
    {45, "Rh", 9, Block::d, 2.28, 9, 142},
    {46, "Pd", 10, Block::d, 2.20, 10, 139},
    {47, "Ag", 11, Block::d, 1.93, 1, 145},
    {48, "Cd", 12, Block::d, 1.69, 2, 144},
    {49, "In", 13, Block::p, 1.78, 3, 142},
    {50, "Sn", 14, Block::p, 1.96, 4, 139},
    {51, "Sb", 15, Block::p, 2.05, 5, 139},
    {52, "Te", 16, Block::p, 2.10, 6, 138},
    {53, "I", 17, Block::p, 2.66, 7, 139},
    {54, "Xe", 18, Block::p, 2.60, 8, 140},
    {55, "Cs", 1, Block::s, 0.79, 1, 244},
    {56, "Ba", 2, Block::s, 0.89, 2, 215},
    {57, "La", 3, Block::f, 1.10, 3, 207},
    {58, "Ce", 3, Block::f, 1.12, 3, 204},
    {59, "Pr", 3, Block::f, 1.13, 3, 203},
    {60, "Nd", 3, Block::f, 1.14, 3, 201},
    {61, "Pm", 3, Block::f, 1.13, 3, 199},
    {62, "Sm", 3, Block::f, 1.17, 3, 198},
    {63, "Eu", 3, Block::f, 1.20, 3, 198},
    {64, "Gd", 3, Block::f, 1.20, 3, 196},
    {65, "Tb", 3, Block::f, 1.10, 3, 194},
    {66, "Dy", 3, Block::f, 1.22, 3, 192},
    {67, "Ho", 3, Block::f, 1.23, 3, 192},
    {68, "Er", 3, Block::f, 1.24, 3, 189},
    {69, "Tm", 3, Block::f, 1.25, 3, 190},
    {70, "Yb", 3, Block::f, 1.10, 3, 187},
    {71, "Lu", 3, Block::d, 1.27, 3, 187},
    {72, "Hf", 4, Block::d, 1.30, 4, 175},
    {73, "Ta", 5, Block::d, 1.50, 5, 170},
    {74, "W", 6, Block::d, 2.36, 6, 162},
    {75, "Re", 7, Block::d, 1.90, 7, 151},
    {76, "Os", 8, Block::d, 2.20, 8, 144},
    {77, "Ir", 9, Block::d, 2.20, 9, 141},
    {78, "Pt", 10, Block::d, 2.28, 10, 136},
    {79, "Au", 11, Block::d, 2.54, 1, 136},
    {80, "Hg", 12, Block::d, 2.00, 2, 132},
    {81, "Tl", 13, Block::p, 1.62, 3, 145},
    {82, "Pb", 14, Block::p, 2.33, 4, 146},
    {83, "Bi", 15, Block::p, 2.02, 5, 148},
    {84, "Po", 16, Block::p, 2.00, 6, 140},
    {85, "At", 17, Block::p, 2.20, 7, 150},
    {86, "Rn", 18, Block::p, 2.20, 8, 150},
    {87, "Fr", 1, Block::s, 0.70, 1, 260},
    {88, "Ra", 2, Block::s, 0.90, 2, 221},
    {89, "Ac", 3, Block::f, 1.10, 3, 215},
    {90, "Th", 3, Block::f, 1.30, 3, 206},
    {91, "Pa", 3, Block::f, 1.50, 3, 200},
    {92, "U", 3, Block::f, 1.38, 3, 196},
    {93, "Np", 3, Block::f, 1.36, 3, 190},
    {94, "Pu", 3, Block::f, 1.28, 3, 187},
    {95, "Am", 3, Block::f, 1.30, 3, 180},
    {96, "Cm", 3, Block::f, 1.30, 3, 169},
    {97, "Bk", 3, Block::f, 1.30, 3, 168},
    {98, "Cf", 3, Block::f, 1.30, 3, 168},
    {99, "Es", 3, Block::f, 1.30, 3, 165},
    {100, "Fm", 3, Block::f, 1.30, 3, 167},
    {101, "Md", 3, Block::f, 1.30, 3, 173},
    {102, "No", 3, Block::f, 1.30, 3, 176},
    {103, "Lr", 3, Block::d, 1.30, 3, 161},
}};

// Symbols past Lr, recognized only so they can be filtered.
constexpr std::array<std::string_view, 15> kHeavySymbols{
    "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

}  // namespace

std::span<const ElementData> element_table() { return kTable; }

std::optional<int> atomic_number(std::string_view symbol) {
  if (symbol.empty() || symbol.size() > 2) return std::nullopt;
  std::string norm(symbol);
  norm[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(norm[0])));
  if (norm.size() == 2) norm[1] = static_cast<char>(std::tolower(static_cast<unsigned char>(norm[1])));
  for (const ElementData& e : kTable) {
    if (e.symbol == norm) return e.z;
  }
  for (std::size_t i = 0; i < kHeavySymbols.size(); ++i) {
    if (kHeavySymbols[i] == norm) return static_cast<int>(kMaxSupportedZ + 1 + i);
  }
  return std::nullopt;
}

const ElementData& element(int z) {
  if (z < 1 || z > kMaxSupportedZ) {
    throw Error(Errc::UnknownElement, "atomic number " + std::to_string(z) + " is not supported");
  }
  return kTable[static_cast<std::size_t>(z - 1)];
}

std::string_view element_symbol(int z) { return element(z).symbol; }

}  // namespace itt
