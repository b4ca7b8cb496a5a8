//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/mol/substructure.h"

#include <algorithm>
#include <functional>

#include "chemeval/mol/smiles.h"

namespace chemeval::mol {
namespace {

bool is_query_any(const Atom &a) { return a.wildcard || a.any_aromaticity; }

bool atom_matches(const Atom &p, const Atom &m) {
  if (p.wildcard)
    return true;
  if (p.atomic_number != m.atomic_number)
    return false;
  if (!p.any_aromaticity && p.aromatic != m.aromatic)
    return false;
  if (p.bracket && p.charge != m.charge)
    return false;
  if (p.isotope && p.isotope != m.isotope)
    return false;
  if (p.h_written && p.explicit_h != m.total_h())
    return false;
  return true;
}

bool bond_matches(const MoleculeGraph &pattern, const Bond &p, const Bond &m) {
  if (p.order == m.order)
    return true;
  if (p.order == BondOrder::kSingle && m.order == BondOrder::kAromatic)
    return is_query_any(pattern.atom(p.begin)) ||
           is_query_any(pattern.atom(p.end));
  return false;
}

}  // namespace

MoleculeGraph parse_pattern(std::string_view text) {
  ParseOptions opt;
  opt.pattern = true;
  return parse_smiles(text, opt);
}

std::vector<std::vector<int>> find_matches(const MoleculeGraph &mol,
                                           const MoleculeGraph &pattern,
                                           std::size_t limit) {
  std::vector<std::vector<int>> found;
  const int pn = static_cast<int>(pattern.num_atoms());
  const int mn = static_cast<int>(mol.num_atoms());
  if (pn == 0 || pn > mn || limit == 0)
    return found;

  // Visit pattern atoms breadth-first so each one (after a fragment's first)
  // has an already mapped neighbour to draw candidates from.
  std::vector<int> order;
  std::vector<int> anchor(pn, -1);
  std::vector<char> seen(pn, 0);
  for (int s = 0; s < pn; ++s) {
    if (seen[s])
      continue;
    seen[s] = 1;
    std::size_t head = order.size();
    order.push_back(s);
    while (head < order.size()) {
      const int u = order[head++];
      for (const auto &nb : pattern.neighbors(u)) {
        if (seen[nb.atom])
          continue;
        seen[nb.atom] = 1;
        anchor[nb.atom] = u;
        order.push_back(nb.atom);
      }
    }
  }

  std::vector<int> map(pn, -1);
  std::vector<char> used(mn, 0);

  auto feasible = [&](int p, int m) {
    if (used[m] || !atom_matches(pattern.atom(p), mol.atom(m)))
      return false;
    for (const auto &nb : pattern.neighbors(p)) {
      const int q = map[nb.atom];
      if (q < 0)
        continue;
      const int mb = mol.bond_between(m, q);
      if (mb < 0 || !bond_matches(pattern, pattern.bond(nb.bond), mol.bond(mb)))
        return false;
    }
    return true;
  };

  std::function<bool(std::size_t)> extend = [&](std::size_t depth) -> bool {
    if (depth == order.size()) {
      found.push_back(map);
      return found.size() >= limit;
    }
    const int p = order[depth];
    auto try_candidate = [&](int m) {
      if (!feasible(p, m))
        return false;
      map[p] = m;
      used[m] = 1;
      const bool stop = extend(depth + 1);
      map[p] = -1;
      used[m] = 0;
      return stop;
    };
    if (anchor[p] >= 0) {
      for (const auto &nb : mol.neighbors(map[anchor[p]]))
        if (try_candidate(nb.atom))
          return true;
    } else {
      for (int m = 0; m < mn; ++m)
        if (try_candidate(m))
          return true;
    }
    return false;
  };
  extend(0);
  return found;
}

bool has_substructure(const MoleculeGraph &mol, const MoleculeGraph &pattern) {
  return !find_matches(mol, pattern, 1).empty();
}

}  // namespace chemeval::mol
