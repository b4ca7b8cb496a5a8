//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/mol/molecule.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "chemeval/mol/element.h"

namespace chemeval::mol {

std::string_view Atom::symbol() const {
  if (wildcard)
    return "*";
  return element_symbol(atomic_number);
}

int Bond::valence_contribution() const {
  if (kekule != 0)
    return kekule;
  switch (order) {
  case BondOrder::kSingle: return 1;
  case BondOrder::kDouble: return 2;
  case BondOrder::kTriple: return 3;
  case BondOrder::kAromatic: return 1;
  }
  return 1;
}

int MoleculeGraph::add_atom(Atom atom) {
  atoms_.push_back(std::move(atom));
  adj_.emplace_back();
  return static_cast<int>(atoms_.size()) - 1;
}

int MoleculeGraph::add_bond(int a, int b, BondOrder order, BondMark mark) {
  const int n = static_cast<int>(atoms_.size());
  if (a < 0 || b < 0 || a >= n || b >= n)
    throw MolError("bond endpoint out of range");
  if (a == b)
    throw MolError("bond endpoints must differ");
  if (bond_between(a, b) >= 0)
    throw MolError("duplicate bond between atoms " + std::to_string(a) +
                   " and " + std::to_string(b));

  Bond bond;
  bond.begin = a;
  bond.end = b;
  bond.order = order;
  bond.mark = mark;
  switch (order) {
  case BondOrder::kSingle: bond.kekule = 1; break;
  case BondOrder::kDouble: bond.kekule = 2; break;
  case BondOrder::kTriple: bond.kekule = 3; break;
  case BondOrder::kAromatic: bond.kekule = 0; break;
  }
  const int idx = static_cast<int>(bonds_.size());
  bonds_.push_back(bond);
  adj_[a].push_back({b, idx});
  adj_[b].push_back({a, idx});
  return idx;
}

int MoleculeGraph::bond_between(int a, int b) const {
  if (a < 0 || a >= static_cast<int>(adj_.size()))
    return -1;
  for (const auto &nb : adj_[a])
    if (nb.atom == b)
      return nb.bond;
  return -1;
}

std::vector<int> MoleculeGraph::fragment_ids() const {
  const int n = static_cast<int>(atoms_.size());
  std::vector<int> ids(n, -1);
  int next = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (ids[s] >= 0)
      continue;
    ids[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const auto &nb : adj_[u]) {
        if (ids[nb.atom] < 0) {
          ids[nb.atom] = next;
          stack.push_back(nb.atom);
        }
      }
    }
    ++next;
  }
  return ids;
}

int MoleculeGraph::fragment_count() const {
  auto ids = fragment_ids();
  return ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
}

int MoleculeGraph::bond_order_sum(int atom) const {
  int sum = 0;
  for (const auto &nb : adj_[atom])
    sum += bonds_[nb.bond].valence_contribution();
  return sum;
}

int MoleculeGraph::heavy_degree(int atom) const {
  int d = 0;
  for (const auto &nb : adj_[atom])
    if (atoms_[nb.atom].atomic_number != 1)
      ++d;
  return d;
}

MoleculeGraph MoleculeGraph::subgraph(std::span<const int> keep) const {
  std::vector<int> remap(atoms_.size(), -1);
  MoleculeGraph out;
  for (int old : keep)
    remap[old] = out.add_atom(atoms_[old]);

  std::vector<int> bond_remap(bonds_.size(), -1);
  for (std::size_t i = 0; i < bonds_.size(); ++i) {
    const Bond &b = bonds_[i];
    if (remap[b.begin] < 0 || remap[b.end] < 0)
      continue;
    int nb = out.add_bond(remap[b.begin], remap[b.end], b.order, b.mark);
    out.bonds_[nb].kekule = b.kekule;
    out.bonds_[nb].in_ring = b.in_ring;
    bond_remap[i] = nb;
  }

  for (auto &atom : out.atoms_) {
    if (atom.chiral == ChiralTag::kNone)
      continue;
    bool ok = true;
    for (int &ref : atom.stereo_refs) {
      if (ref == kImplicitHydrogenRef)
        continue;
      if (remap[ref] < 0) {
        ok = false;
        break;
      }
      ref = remap[ref];
    }
    if (!ok) {
      atom.chiral = ChiralTag::kNone;
      atom.stereo_refs.clear();
    }
  }

  for (const auto &s : db_stereo_) {
    if (bond_remap[s.bond] < 0 || remap[s.begin_ref] < 0 ||
        remap[s.end_ref] < 0)
      continue;
    DoubleBondStereo t = s;
    t.bond = bond_remap[s.bond];
    t.begin_ref = remap[s.begin_ref];
    t.end_ref = remap[s.end_ref];
    // Endpoint orientation can flip when the kept order differs.
    const Bond &ob = bonds_[s.bond];
    const Bond &nb = out.bonds_[t.bond];
    if (remap[ob.begin] != nb.begin)
      std::swap(t.begin_ref, t.end_ref);
    out.db_stereo_.push_back(t);
  }
  return out;
}

std::vector<int> heavy_atom_composition(const MoleculeGraph &g) {
  std::vector<int> counts(kMaxAtomicNumber + 1, 0);
  for (const auto &a : g.atoms())
    if (a.atomic_number > 1 && !a.wildcard)
      ++counts[a.atomic_number];
  return counts;
}

}  // namespace chemeval::mol
