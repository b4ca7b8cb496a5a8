//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/mol/element.h"

#include <array>
#include <string_view>

namespace chemeval::mol {
namespace {

constexpr std::array<std::string_view, kMaxAtomicNumber + 1> kSymbols = {
    "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
    "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
    "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
    "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
    "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
    "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
    "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
    "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
    "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

// Main-group valence families. "Light" rows forbid expanded octets.
struct Family {
  int group;  // 13..18, or 1 for hydrogen
  bool light;
};

std::optional<Family> family_of(int z) {
  switch (z) {
  case 1: return Family{1, true};
  case 5: return Family{13, true};
  case 6: return Family{14, true};
  case 7: return Family{15, true};
  case 8: return Family{16, true};
  case 9: return Family{17, true};
  case 14: return Family{14, false};
  case 15: return Family{15, false};
  case 16: return Family{16, false};
  case 17: return Family{17, false};
  case 33: return Family{15, false};
  case 34: return Family{16, false};
  case 35: return Family{17, false};
  case 52: return Family{16, false};
  case 53: return Family{17, false};
  default: return std::nullopt;
  }
}

constexpr int kV0[] = {0};
constexpr int kV1[] = {1};
constexpr int kV2[] = {2};
constexpr int kV3[] = {3};
constexpr int kV4[] = {4};
constexpr int kV35[] = {3, 5};
constexpr int kV246[] = {2, 4, 6};

std::span<const int> group_valences(int group, bool light) {
  switch (group) {
  case 13: return kV3;
  case 14: return kV4;
  case 15: return light ? std::span<const int>(kV3) : kV35;
  case 16: return light ? std::span<const int>(kV2) : kV246;
  case 17: return kV1;
  case 18: return kV0;
  default: return {};
  }
}

}  // namespace

std::optional<int> element_from_symbol(std::string_view symbol) {
  for (int z = 1; z <= kMaxAtomicNumber; ++z)
    if (kSymbols[z] == symbol)
      return z;
  return std::nullopt;
}

std::string_view element_symbol(int atomic_number) {
  if (atomic_number < 0 || atomic_number > kMaxAtomicNumber)
    return "?";
  return kSymbols[atomic_number];
}

bool is_organic_subset(int z) {
  switch (z) {
  case 5: case 6: case 7: case 8: case 9: case 15: case 16: case 17: case 35:
  case 53:
    return true;
  default:
    return false;
  }
}

bool can_be_aromatic(int z) {
  switch (z) {
  case 5: case 6: case 7: case 8: case 15: case 16: case 33: case 34: case 52:
    return true;
  default:
    return false;
  }
}

bool has_valence_rule(int atomic_number) {
  return family_of(atomic_number).has_value();
}

std::span<const int> allowed_valences(int atomic_number, int charge) {
  auto fam = family_of(atomic_number);
  if (!fam)
    return {};

  if (fam->group == 1)
    return charge == 0 ? std::span<const int>(kV1) : std::span<const int>(kV0);

  // Neutral nitrogen keeps the pentavalent form so that uncharged nitro
  // groups parse as legal input for the normalization step.
  if (charge == 0) {
    if (atomic_number == 7)
      return kV35;
    return group_valences(fam->group, fam->light);
  }

  // A charged atom behaves like its isoelectronic neighbour: N+ like C,
  // O- like F, C- like N, B- like C.
  int effective = fam->group - charge;
  if (effective < 13 || effective > 18)
    return {};
  return group_valences(effective, true);
}

std::optional<int> default_valence(int atomic_number) {
  auto v = allowed_valences(atomic_number, 0);
  if (v.empty())
    return std::nullopt;
  return v.front();
}

}  // namespace chemeval::mol
