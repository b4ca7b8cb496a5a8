//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_MOL_PERCEPTION_H_
#define CHEMEVAL_MOL_PERCEPTION_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "chemeval/mol/molecule.h"

namespace chemeval::mol {

/// Raised when declared-aromatic atoms cannot be kekulized or do not lie on
/// a ring satisfying the 4n+2 rule.
class AromaticityError : public std::runtime_error {
public:
  AromaticityError(std::vector<int> atoms, std::string message)
      : std::runtime_error(std::move(message)), atoms_(std::move(atoms)) { }

  const std::vector<int> &atoms() const { return atoms_; }

private:
  std::vector<int> atoms_;
};

/// Gives every non-bracket atom the hydrogens that bring it to the smallest
/// allowed valence at or above its bond-order sum. Aromatic atoms reserve one
/// unit for the ring pi bond when their default valence allows it. Atoms for
/// which nothing fits get zero hydrogens and `valence_unresolved`.
MoleculeGraph assign_implicit_hydrogens(const MoleculeGraph &g);

struct RingSet {
  /// Smallest set of smallest rings; size = bonds - atoms + components.
  std::vector<std::vector<int>> sssr;
  /// Rings that are not sums of strictly smaller rings (order independent
  /// superset of the SSSR, used for aromaticity).
  std::vector<std::vector<int>> relevant;
};

/// Rings as atom sequences in cycle order.
RingSet perceive_rings(const MoleculeGraph &g);

/// Bonds that lie on at least one cycle.
std::vector<bool> ring_bond_mask(const MoleculeGraph &g);

/// Copy of g with rings() and Bond::in_ring filled in.
MoleculeGraph with_rings(const MoleculeGraph &g);

/// Assigns localized orders to aromatic bonds. Throws AromaticityError when
/// no perfect matching of the pi-bond-requiring atoms exists.
MoleculeGraph kekulize(const MoleculeGraph &g);

struct AromaticityOutcome {
  MoleculeGraph graph;
  /// Declared-aromatic atoms that failed (kekulization or 4n+2).
  std::vector<int> failed_atoms;
  std::string message;
};

/// Re-derives aromatic flags from the localized structure using the Hückel
/// rule on each relevant ring. Never throws; failures are reported.
AromaticityOutcome perceive_aromaticity_checked(const MoleculeGraph &g);

/// Throwing form of perceive_aromaticity_checked.
MoleculeGraph perceive_aromaticity(const MoleculeGraph &g);

/// Pi-electron contribution of an atom to a ring, or -1 when the atom cannot
/// take part in an aromatic ring.
int pi_contribution(const MoleculeGraph &g, int atom);

}  // namespace chemeval::mol

#endif  // CHEMEVAL_MOL_PERCEPTION_H_
