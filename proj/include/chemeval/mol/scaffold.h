//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_MOL_SCAFFOLD_H_
#define CHEMEVAL_MOL_SCAFFOLD_H_

#include "chemeval/mol/molecule.h"

namespace chemeval::mol {

struct Scaffold {
  MoleculeGraph graph;
  bool is_empty = true;
};

/// Bemis-Murcko framework: ring systems plus the linkers between them.
/// Side-chain atoms are peeled off until only atoms of degree >= 2 remain;
/// the atoms they were attached to gain the lost valence as hydrogens, and
/// aromaticity is perceived again on the result. `g` must be prepared.
Scaffold bemis_murcko_scaffold(const MoleculeGraph &g);

}  // namespace chemeval::mol

#endif  // CHEMEVAL_MOL_SCAFFOLD_H_
