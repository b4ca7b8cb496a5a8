//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_MOL_ELEMENT_H_
#define CHEMEVAL_MOL_ELEMENT_H_

#include <optional>
#include <span>
#include <string_view>

namespace chemeval::mol {

constexpr int kMaxAtomicNumber = 118;

/// Atomic number for a capitalized element symbol ("C", "Cl", "Se").
std::optional<int> element_from_symbol(std::string_view symbol);

std::string_view element_symbol(int atomic_number);

/// Elements that may be written without brackets.
bool is_organic_subset(int atomic_number);

/// Elements that may be written in lowercase (aromatic) form.
bool can_be_aromatic(int atomic_number);

/// Allowed total valences (bond-order sum plus hydrogens) for an element
/// carrying the given formal charge, ascending. Empty when the element has no
/// valence rule (metals, noble gases, exotic charge states); callers treat that
/// as "unconstrained".
std::span<const int> allowed_valences(int atomic_number, int charge);

/// Whether the element is covered by the valence table at all.
bool has_valence_rule(int atomic_number);

/// Smallest allowed valence of the neutral element, or nullopt.
std::optional<int> default_valence(int atomic_number);

}  // namespace chemeval::mol

#endif  // CHEMEVAL_MOL_ELEMENT_H_
