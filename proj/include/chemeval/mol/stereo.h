//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_MOL_STEREO_H_
#define CHEMEVAL_MOL_STEREO_H_

#include <vector>

#include "chemeval/mol/molecule.h"

namespace chemeval::mol {

/// Interpretation of the / and \ marks of a graph.
struct BondMarkAnalysis {
  /// Fully specified, consistent double-bond geometries.
  std::vector<DoubleBondStereo> stereo;
  /// Double bonds where two marks on the same end place both substituents on
  /// the same side.
  std::vector<int> conflicting;
  /// Double bonds marked on one end only.
  std::vector<int> one_sided;
  /// Marked bonds that touch no double bond.
  std::vector<int> orphan_marks;
};

/// Side (+1 up / -1 down) of `neighbor` relative to `center` as encoded by
/// the mark on the bond joining them; 0 when unmarked.
int mark_side(const Bond &bond, int center);

BondMarkAnalysis analyze_bond_marks(const MoleculeGraph &g);

/// Parity of the permutation taking `from` to `to` (same elements); true
/// when odd.
bool odd_permutation(std::vector<int> from, const std::vector<int> &to);

}  // namespace chemeval::mol

#endif  // CHEMEVAL_MOL_STEREO_H_
