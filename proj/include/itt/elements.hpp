#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace itt {

inline constexpr int kMaxSupportedZ = 103;

enum class Block : std::uint8_t { s, p, d, f };

struct ElementData {
  int z;
  std::string_view symbol;
  int group;                 // 1..18; lanthanides and actinides are placed in group 3
  Block block;
  double electronegativity;  // Pauling; Allen values for He, Ne, Ar
  int valence_electrons;
  double radius_pm;          // single-bond covalent radius
};

// Version tag of the shipped element property table.
inline constexpr std::string_view kElementTableVersion = "elements-v1";

// Elements 1..103 in order of atomic number.
std::span<const ElementData> element_table();

// Atomic number for a symbol in any letter case ("Zn", "ZN", "zn"), including
// elements beyond 103 so callers can tell "unsupported" from "not an element".
std::optional<int> atomic_number(std::string_view symbol);

// Data for a supported element; throws UnknownElement for z outside 1..103.
const ElementData& element(int z);

std::string_view element_symbol(int z);

}  // namespace itt
