//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_MOL_CANONICAL_H_
#define CHEMEVAL_MOL_CANONICAL_H_

#include <vector>

#include "chemeval/mol/molecule.h"

namespace chemeval::mol {

/// Iteratively refined atom classes (Morgan-style), without tie breaking.
/// Atoms sharing a class are indistinguishable by their extended
/// connectivity. Values are dense, starting at 0, and independent of input
/// atom order.
std::vector<int> symmetry_classes(const MoleculeGraph &g);

/// Canonical ranks: a permutation of 0..n-1 obtained from symmetry_classes()
/// by repeatedly splitting the lowest tied class at its lowest-indexed atom
/// and refining again.
std::vector<int> canonical_ranks(const MoleculeGraph &g);

}  // namespace chemeval::mol

#endif  // CHEMEVAL_MOL_CANONICAL_H_
