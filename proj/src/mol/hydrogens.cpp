//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/mol/element.h"
#include "chemeval/mol/perception.h"

namespace chemeval::mol {

MoleculeGraph assign_implicit_hydrogens(const MoleculeGraph &g) {
  MoleculeGraph out = g;
  for (int i = 0; i < static_cast<int>(out.num_atoms()); ++i) {
    Atom &a = out.mutable_atom(i);
    a.implicit_h = 0;
    a.valence_unresolved = false;
    if (a.bracket || a.wildcard)
      continue;

    const int sum = out.bond_order_sum(i);
    if (a.aromatic) {
      auto dv = default_valence(a.atomic_number);
      if (!dv)
        continue;
      if (sum + 1 <= *dv)
        a.implicit_h = *dv - sum - 1;
      else if (sum <= *dv)
        a.implicit_h = *dv - sum;
      else
        a.valence_unresolved = true;
      continue;
    }

    auto allowed = allowed_valences(a.atomic_number, a.charge);
    if (allowed.empty())
      continue;
    bool fit = false;
    for (int v : allowed) {
      if (v >= sum) {
        a.implicit_h = v - sum;
        fit = true;
        break;
      }
    }
    if (!fit)
      a.valence_unresolved = true;
  }
  return out;
}

}  // namespace chemeval::mol
