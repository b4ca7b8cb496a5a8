//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "chemeval/mol/element.h"
#include "chemeval/mol/perception.h"

namespace chemeval::mol {
namespace {

bool valence_allowed(int z, int charge, int v) {
  auto allowed = allowed_valences(z, charge);
  return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
}

/// Aromatic atoms that must receive exactly one double bond from the ring
/// system.
bool needs_pi_bond(const MoleculeGraph &g, int i) {
  const Atom &a = g.atom(i);
  if (!a.aromatic || a.wildcard)
    return false;
  int sigma = a.total_h();
  for (const auto &nb : g.neighbors(i)) {
    const Bond &b = g.bond(nb.bond);
    sigma += b.order == BondOrder::kAromatic ? 1 : b.valence_contribution();
  }
  if (!has_valence_rule(a.atomic_number))
    return false;
  return valence_allowed(a.atomic_number, a.charge, sigma + 1);
}

class Matcher {
public:
  Matcher(const MoleculeGraph &g, const std::vector<bool> &need)
      : g_(g), need_(need), mate_(g.num_atoms(), -1) { }

  bool solve(const std::vector<int> &atoms) {
    budget_ = 2'000'000;
    return search(atoms);
  }

  int mate(int i) const { return mate_[i]; }

private:
  std::vector<int> free_partners(int u) const {
    std::vector<int> out;
    for (const auto &nb : g_.neighbors(u)) {
      if (g_.bond(nb.bond).order != BondOrder::kAromatic)
        continue;
      if (need_[nb.atom] && mate_[nb.atom] < 0)
        out.push_back(nb.atom);
    }
    return out;
  }

  bool search(const std::vector<int> &atoms) {
    if (--budget_ < 0)
      return false;
    int best = -1;
    std::size_t best_count = 0;
    for (int u : atoms) {
      if (mate_[u] >= 0)
        continue;
      const std::size_t c = free_partners(u).size();
      if (best < 0 || c < best_count) {
        best = u;
        best_count = c;
        if (c <= 1)
          break;
      }
    }
    if (best < 0)
      return true;
    if (best_count == 0)
      return false;
    for (int v : free_partners(best)) {
      mate_[best] = v;
      mate_[v] = best;
      if (search(atoms))
        return true;
      mate_[best] = -1;
      mate_[v] = -1;
    }
    return false;
  }

  const MoleculeGraph &g_;
  const std::vector<bool> &need_;
  std::vector<int> mate_;
  long budget_ = 0;
};

}  // namespace

MoleculeGraph kekulize(const MoleculeGraph &input) {
  MoleculeGraph g = input;
  const auto ring = ring_bond_mask(g);

  // Aromatic bonds outside rings are plain single bonds (biaryl links).
  for (int b = 0; b < static_cast<int>(g.num_bonds()); ++b) {
    Bond &bond = g.mutable_bond(b);
    if (bond.order == BondOrder::kAromatic && !ring[b]) {
      bond.order = BondOrder::kSingle;
      bond.kekule = 1;
    }
  }

  const int n = static_cast<int>(g.num_atoms());
  std::vector<bool> need(n, false);
  for (int i = 0; i < n; ++i)
    need[i] = needs_pi_bond(g, i);

  // Match each connected aromatic system separately.
  std::vector<int> system(n, -1);
  int nsys = 0;
  for (int s = 0; s < n; ++s) {
    if (!g.atom(s).aromatic || system[s] >= 0)
      continue;
    std::vector<int> stack{s};
    system[s] = nsys;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const auto &nb : g.neighbors(u)) {
        if (g.bond(nb.bond).order == BondOrder::kAromatic &&
            system[nb.atom] < 0) {
          system[nb.atom] = nsys;
          stack.push_back(nb.atom);
        }
      }
    }
    ++nsys;
  }

  Matcher matcher(g, need);
  std::vector<int> failed;
  for (int sid = 0; sid < nsys; ++sid) {
    std::vector<int> members, needy;
    for (int i = 0; i < n; ++i) {
      if (system[i] != sid)
        continue;
      members.push_back(i);
      if (need[i])
        needy.push_back(i);
    }
    if (!matcher.solve(needy))
      failed.insert(failed.end(), members.begin(), members.end());
  }

  if (!failed.empty())
    throw AromaticityError(failed, "cannot kekulize aromatic system of " +
                                       std::to_string(failed.size()) +
                                       " atoms");

  for (int b = 0; b < static_cast<int>(g.num_bonds()); ++b) {
    Bond &bond = g.mutable_bond(b);
    if (bond.order != BondOrder::kAromatic)
      continue;
    bond.kekule = matcher.mate(bond.begin) == bond.end ? 2 : 1;
  }
  return g;
}

int pi_contribution(const MoleculeGraph &g, int i) {
  const Atom &a = g.atom(i);
  if (a.wildcard)
    return -1;
  int doubles = 0;
  bool exocyclic_double = false;
  for (const auto &nb : g.neighbors(i)) {
    const Bond &b = g.bond(nb.bond);
    const int order = b.valence_contribution();
    if (order == 3)
      return -1;
    if (order == 2) {
      ++doubles;
      if (!b.in_ring)
        exocyclic_double = true;
    }
  }
  if (doubles > 1)
    return -1;
  if (doubles == 1)
    return exocyclic_double ? 0 : 1;

  const int connections = g.degree(i) + a.total_h();
  const int z = a.atomic_number;
  switch (z) {
  case 7: case 15: case 33:
    if (a.charge == 0 && connections == 3)
      return 2;
    if (a.charge == -1 && connections == 2)
      return 2;
    return -1;
  case 8: case 16: case 34: case 52:
    if (a.charge == 0 && connections == 2)
      return 2;
    return -1;
  case 6:
    if (a.charge == -1 && connections == 3)
      return 2;
    if (a.charge == 1 && connections == 3)
      return 0;
    return -1;
  case 5:
    if (a.charge == 0 && connections == 3)
      return 0;
    return -1;
  default:
    return -1;
  }
}

AromaticityOutcome perceive_aromaticity_checked(const MoleculeGraph &input) {
  AromaticityOutcome out;
  MoleculeGraph g;
  try {
    g = kekulize(input);
  } catch (const AromaticityError &e) {
    out.graph = with_rings(input);
    out.failed_atoms = e.atoms();
    out.message = e.what();
    return out;
  }

  const auto ring_mask = ring_bond_mask(g);
  for (int b = 0; b < static_cast<int>(g.num_bonds()); ++b)
    g.mutable_bond(b).in_ring = ring_mask[b];
  const RingSet rings = perceive_rings(g);
  g.set_rings(rings.sssr);

  const int n = static_cast<int>(g.num_atoms());
  std::vector<bool> atom_arom(n, false);
  std::vector<bool> bond_arom(g.num_bonds(), false);
  std::vector<int> pi(n);
  for (int i = 0; i < n; ++i)
    pi[i] = pi_contribution(g, i);

  for (const auto &ring : rings.relevant) {
    int electrons = 0;
    bool ok = true;
    for (int atom : ring) {
      if (pi[atom] < 0) {
        ok = false;
        break;
      }
      electrons += pi[atom];
    }
    if (!ok || electrons < 2 || (electrons - 2) % 4 != 0)
      continue;
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const int u = ring[k];
      const int v = ring[(k + 1) % ring.size()];
      atom_arom[u] = true;
      bond_arom[g.bond_between(u, v)] = true;
    }
  }

  for (int i = 0; i < n; ++i) {
    Atom &a = g.mutable_atom(i);
    if (a.declared_aromatic && !atom_arom[i])
      out.failed_atoms.push_back(i);
    a.aromatic = atom_arom[i];
  }
  for (int b = 0; b < static_cast<int>(g.num_bonds()); ++b) {
    Bond &bond = g.mutable_bond(b);
    if (bond_arom[b]) {
      bond.order = BondOrder::kAromatic;
      bond.mark = BondMark::kNone;
    } else {
      bond.order = static_cast<BondOrder>(bond.kekule == 0 ? 1 : bond.kekule);
    }
  }

  // Geometry on bonds that became aromatic is meaningless.
  std::vector<DoubleBondStereo> kept;
  for (const auto &s : g.double_bond_stereo())
    if (!bond_arom[s.bond])
      kept.push_back(s);
  g.set_double_bond_stereo(std::move(kept));

  if (!out.failed_atoms.empty())
    out.message = "declared aromatic atoms not on a 4n+2 ring";
  out.graph = std::move(g);
  return out;
}

MoleculeGraph perceive_aromaticity(const MoleculeGraph &g) {
  auto outcome = perceive_aromaticity_checked(g);
  if (!outcome.failed_atoms.empty())
    throw AromaticityError(outcome.failed_atoms, outcome.message);
  return std::move(outcome.graph);
}

}  // namespace chemeval::mol
