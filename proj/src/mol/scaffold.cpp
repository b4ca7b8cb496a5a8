//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/mol/scaffold.h"

#include <vector>

#include "chemeval/mol/perception.h"

namespace chemeval::mol {

Scaffold bemis_murcko_scaffold(const MoleculeGraph &g) {
  const int n = static_cast<int>(g.num_atoms());
  std::vector<char> removed(n, 0);
  std::vector<int> degree(n);
  std::vector<int> gained_h(n, 0);
  std::vector<int> queue;
  for (int i = 0; i < n; ++i) {
    degree[i] = g.degree(i);
    if (degree[i] <= 1)
      queue.push_back(i);
  }
  while (!queue.empty()) {
    const int u = queue.back();
    queue.pop_back();
    if (removed[u])
      continue;
    removed[u] = 1;
    for (const auto &nb : g.neighbors(u)) {
      if (removed[nb.atom])
        continue;
      gained_h[nb.atom] += g.bond(nb.bond).valence_contribution();
      if (--degree[nb.atom] <= 1)
        queue.push_back(nb.atom);
    }
  }

  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (!removed[i])
      keep.push_back(i);
  Scaffold out;
  if (keep.empty())
    return out;

  MoleculeGraph sub = g.subgraph(keep);
  for (int k = 0; k < static_cast<int>(keep.size()); ++k) {
    Atom &a = sub.mutable_atom(k);
    const int extra = gained_h[keep[k]];
    if (a.bracket)
      a.explicit_h += extra;
    else
      a.implicit_h += extra;
    a.declared_aromatic = false;
    a.aromatic = false;
  }
  // Restart perception from the localized structure: removing an exocyclic
  // substituent may break the aromatic system it belonged to.
  for (int b = 0; b < static_cast<int>(sub.num_bonds()); ++b) {
    Bond &bond = sub.mutable_bond(b);
    const int k = bond.valence_contribution();
    bond.order = static_cast<BondOrder>(k);
    bond.kekule = k;
  }
  out.graph = perceive_aromaticity(sub);
  out.is_empty = false;
  return out;
}

}  // namespace chemeval::mol
