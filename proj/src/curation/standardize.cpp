//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/curation/standardize.h"

#include <algorithm>
#include <functional>
#include <optional>

#include "chemeval/mol/element.h"
#include "chemeval/mol/perception.h"
#include "chemeval/mol/smiles.h"

namespace chemeval::curation {

using mol::Atom;
using mol::BondOrder;
using mol::MoleculeGraph;

namespace {

constexpr int kN = 7;
constexpr int kO = 8;
constexpr int kS = 16;
constexpr int kC = 6;

/// Kekulé form with every hydrogen count pinned, so edits can move
/// hydrogens and charges without re-running the valence model.
MoleculeGraph localize(const MoleculeGraph &g) {
  MoleculeGraph out = g;
  for (int i = 0; i < static_cast<int>(out.num_atoms()); ++i) {
    Atom &a = out.mutable_atom(i);
    a.explicit_h = a.total_h();
    a.implicit_h = 0;
    a.bracket = true;
    a.aromatic = false;
    a.declared_aromatic = false;
  }
  for (int b = 0; b < static_cast<int>(out.num_bonds()); ++b) {
    auto &bond = out.mutable_bond(b);
    const int k = bond.valence_contribution();
    bond.order = static_cast<BondOrder>(k);
    bond.kekule = k;
  }
  return out;
}

MoleculeGraph settle(MoleculeGraph l) {
  std::vector<mol::DoubleBondStereo> kept;
  for (const auto &s : l.double_bond_stereo())
    if (l.bond(s.bond).kekule == 2)
      kept.push_back(s);
  l.set_double_bond_stereo(std::move(kept));
  return mol::perceive_aromaticity(l);
}

void set_order(MoleculeGraph &l, int bond, int k) {
  auto &b = l.mutable_bond(bond);
  b.order = static_cast<BondOrder>(k);
  b.kekule = k;
  b.mark = mol::BondMark::kNone;
}

void shift_h(MoleculeGraph &l, int atom, int delta) {
  Atom &a = l.mutable_atom(atom);
  a.explicit_h += delta;
  a.chiral = mol::ChiralTag::kNone;
  a.stereo_refs.clear();
}

int order(const MoleculeGraph &g, int bond) {
  return g.bond(bond).valence_contribution();
}

bool legal(const MoleculeGraph &l, int atom, int charge, int h_delta) {
  const Atom &a = l.atom(atom);
  const int v = l.bond_order_sum(atom) + a.total_h() + h_delta;
  const auto allowed = mol::allowed_valences(a.atomic_number, charge);
  return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
}

bool terminal(const MoleculeGraph &g, int atom) {
  return g.degree(atom) == 1 && g.atom(atom).total_h() == 0;
}

using Transform = std::function<std::optional<MoleculeGraph>(const MoleculeGraph &)>;

// N(=O)=O -> [N+](=O)[O-]
std::optional<MoleculeGraph> nitro(const MoleculeGraph &p) {
  for (int n = 0; n < static_cast<int>(p.num_atoms()); ++n) {
    const Atom &a = p.atom(n);
    if (a.atomic_number != kN || a.charge != 0 || p.degree(n) != 3)
      continue;
    std::vector<int> oxo;
    for (const auto &nb : p.neighbors(n)) {
      const Atom &o = p.atom(nb.atom);
      if (o.atomic_number == kO && o.charge == 0 && terminal(p, nb.atom) &&
          order(p, nb.bond) == 2)
        oxo.push_back(nb.bond);
    }
    if (oxo.size() != 2)
      continue;
    MoleculeGraph l = localize(p);
    const int bond = oxo.back();
    set_order(l, bond, 1);
    l.mutable_atom(p.bond(bond).other(n)).charge = -1;
    l.mutable_atom(n).charge = 1;
    return l;
  }
  return std::nullopt;
}

// R-N=N#N and R-[N-]-[N+]#N -> R-N=[N+]=[N-]
std::optional<MoleculeGraph> azide(const MoleculeGraph &p) {
  for (int b = 0; b < static_cast<int>(p.num_atoms()); ++b) {
    if (p.atom(b).atomic_number != kN || p.degree(b) != 2 ||
        p.atom(b).total_h() != 0)
      continue;
    const auto nbs = p.neighbors(b);
    for (int pick = 0; pick < 2; ++pick) {
      const int a = nbs[pick].atom;
      const int c = nbs[1 - pick].atom;
      const int ab = nbs[pick].bond;
      const int bc = nbs[1 - pick].bond;
      if (p.atom(a).atomic_number != kN || p.atom(c).atomic_number != kN ||
          !terminal(p, c) || p.atom(a).total_h() != 0 || p.degree(a) != 2)
        continue;
      if (order(p, bc) != 3)
        continue;
      const int charge =
          p.atom(a).charge + p.atom(b).charge + p.atom(c).charge;
      if (charge != 0)
        continue;
      const bool neutral = order(p, ab) == 2 && p.atom(b).charge == 0;
      const bool ionic = order(p, ab) == 1 && p.atom(a).charge == -1 &&
                         p.atom(b).charge == 1;
      if (!neutral && !ionic)
        continue;
      MoleculeGraph l = localize(p);
      set_order(l, ab, 2);
      set_order(l, bc, 2);
      l.mutable_atom(a).charge = 0;
      l.mutable_atom(b).charge = 1;
      l.mutable_atom(c).charge = -1;
      return l;
    }
  }
  return std::nullopt;
}

// [S+]-[O-] -> S=O (sulfoxides, and sulfones one oxygen at a time)
std::optional<MoleculeGraph> sulfoxide(const MoleculeGraph &p) {
  for (int s = 0; s < static_cast<int>(p.num_atoms()); ++s) {
    if (p.atom(s).atomic_number != kS || p.atom(s).charge <= 0)
      continue;
    for (const auto &nb : p.neighbors(s)) {
      const Atom &o = p.atom(nb.atom);
      if (o.atomic_number != kO || o.charge != -1 || !terminal(p, nb.atom) ||
          order(p, nb.bond) != 1)
        continue;
      MoleculeGraph l = localize(p);
      set_order(l, nb.bond, 2);
      l.mutable_atom(s).charge -= 1;
      l.mutable_atom(nb.atom).charge = 0;
      return l;
    }
  }
  return std::nullopt;
}

bool has_charged_neighbor(const MoleculeGraph &g, int atom, int sign) {
  for (const auto &nb : g.neighbors(atom))
    if (g.atom(nb.atom).charge * sign > 0)
      return true;
  return false;
}

// O-/S- -> OH/SH and protonated N -> N, leaving charge-separated groups
// (adjacent opposite charges) alone.
std::optional<MoleculeGraph> neutralize(const MoleculeGraph &p) {
  for (int i = 0; i < static_cast<int>(p.num_atoms()); ++i) {
    const Atom &a = p.atom(i);
    const bool anion =
        (a.atomic_number == kO || a.atomic_number == kS) && a.charge == -1 &&
        !has_charged_neighbor(p, i, +1);
    const bool cation =
        a.atomic_number == kN && a.charge == 1 && !has_charged_neighbor(p, i, -1);
    if (!anion && !cation)
      continue;
    MoleculeGraph l = localize(p);
    const int delta = anion ? 1 : -1;
    if (l.atom(i).total_h() + delta < 0 || !legal(l, i, 0, delta))
      throw StandardizationConflict(
          i, "neutral form of " + std::string(a.symbol()) + " atom " +
                 std::to_string(i) + " violates valence");
    l.mutable_atom(i).charge = 0;
    shift_h(l, i, delta);
    return l;
  }
  return std::nullopt;
}

// C=C-[OH] -> [CH]-C=O outside aromatic rings
std::optional<MoleculeGraph> enol(const MoleculeGraph &p) {
  for (int o = 0; o < static_cast<int>(p.num_atoms()); ++o) {
    const Atom &oa = p.atom(o);
    if (oa.atomic_number != kO || oa.charge != 0 || oa.total_h() != 1 ||
        p.degree(o) != 1)
      continue;
    const auto &link = p.neighbors(o)[0];
    const int c1 = link.atom;
    if (p.atom(c1).atomic_number != kC || p.atom(c1).aromatic ||
        p.atom(c1).charge != 0 || order(p, link.bond) != 1)
      continue;
    for (const auto &nb : p.neighbors(c1)) {
      const Atom &c2 = p.atom(nb.atom);
      if (c2.atomic_number != kC || c2.aromatic || c2.charge != 0 ||
          order(p, nb.bond) != 2)
        continue;
      MoleculeGraph l = localize(p);
      set_order(l, link.bond, 2);
      set_order(l, nb.bond, 1);
      shift_h(l, o, -1);
      shift_h(l, nb.atom, +1);
      return l;
    }
  }
  return std::nullopt;
}

bool share_six_ring(const MoleculeGraph &g, int a, int b) {
  for (const auto &ring : g.rings()) {
    if (ring.size() != 6)
      continue;
    if (std::find(ring.begin(), ring.end(), a) != ring.end() &&
        std::find(ring.begin(), ring.end(), b) != ring.end())
      return true;
  }
  return false;
}

// Oc1ccccn1 -> O=c1cccc[nH]1
std::optional<MoleculeGraph> hydroxypyridine(const MoleculeGraph &p) {
  for (int o = 0; o < static_cast<int>(p.num_atoms()); ++o) {
    const Atom &oa = p.atom(o);
    if (oa.atomic_number != kO || oa.charge != 0 || oa.total_h() != 1 ||
        p.degree(o) != 1)
      continue;
    const auto &link = p.neighbors(o)[0];
    const int c = link.atom;
    if (!p.atom(c).aromatic || p.atom(c).atomic_number != kC)
      continue;
    for (const auto &nb : p.neighbors(c)) {
      const Atom &n = p.atom(nb.atom);
      if (n.atomic_number != kN || !n.aromatic || n.charge != 0 ||
          n.total_h() != 0 || p.degree(nb.atom) != 2 ||
          !share_six_ring(p, c, nb.atom))
        continue;
      MoleculeGraph edited = p;
      set_order(edited, link.bond, 2);
      for (int k : {o, nb.atom}) {
        Atom &a = edited.mutable_atom(k);
        a.explicit_h = a.total_h();
        a.implicit_h = 0;
        a.bracket = true;
      }
      shift_h(edited, o, -1);
      shift_h(edited, nb.atom, +1);
      try {
        return localize(mol::kekulize(edited));
      } catch (const mol::AromaticityError &) {
        continue;
      }
    }
  }
  return std::nullopt;
}

MoleculeGraph fixpoint(MoleculeGraph p, const std::vector<Transform> &rules) {
  // Every rule strictly reduces a bounded quantity (charges, enol OH); the
  // cap only guards against a rule interaction nobody anticipated.
  const std::size_t cap = 4 * p.num_atoms() + 16;
  for (std::size_t round = 0; round < cap; ++round) {
    bool applied = false;
    for (const auto &rule : rules) {
      if (auto l = rule(p)) {
        p = settle(std::move(*l));
        applied = true;
        break;
      }
    }
    if (!applied)
      break;
  }
  return p;
}

}  // namespace

MoleculeGraph standardize(const MoleculeGraph &g) {
  MoleculeGraph p = fixpoint(g, {nitro, azide, sulfoxide});
  p = fixpoint(std::move(p), {neutralize});
  return fixpoint(std::move(p), {enol, hydroxypyridine});
}

std::string standardize_smiles(std::string_view smiles) {
  return mol::write_canonical_smiles(
      standardize(mol::prepare(mol::parse_smiles(smiles))));
}

}  // namespace chemeval::curation
