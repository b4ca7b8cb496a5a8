//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_MOL_SUBSTRUCTURE_H_
#define CHEMEVAL_MOL_SUBSTRUCTURE_H_

#include <string_view>
#include <vector>

#include "chemeval/mol/molecule.h"

namespace chemeval::mol {

/// Parses a SMILES-like query. Besides plain SMILES it accepts '*' (any atom)
/// and [#n] (element n, aromatic or not). Bracket atoms constrain charge and,
/// when written, the total hydrogen count; organic-subset atoms constrain
/// element and aromaticity only.
MoleculeGraph parse_pattern(std::string_view text);

/// Atom mappings (pattern index -> molecule index) of `pattern` into `mol`,
/// non-induced. Stops after `limit` mappings.
std::vector<std::vector<int>> find_matches(const MoleculeGraph &mol,
                                           const MoleculeGraph &pattern,
                                           std::size_t limit = 1);

bool has_substructure(const MoleculeGraph &mol, const MoleculeGraph &pattern);

}  // namespace chemeval::mol

#endif  // CHEMEVAL_MOL_SUBSTRUCTURE_H_
