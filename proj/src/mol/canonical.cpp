//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/mol/canonical.h"

#include <algorithm>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "chemeval/mol/smiles.h"

namespace chemeval::mol {
namespace {

using Key = std::vector<int>;

int bond_code(const Bond &b) {
  switch (b.order) {
  case BondOrder::kSingle: return 1;
  case BondOrder::kDouble: return 2;
  case BondOrder::kTriple: return 3;
  case BondOrder::kAromatic: return 4;
  }
  return 0;
}

/// Dense re-numbering of keys in sorted order.
std::vector<int> rank_keys(const std::vector<Key> &keys) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i)
    idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<int> cls(n);
  int c = -1;
  for (int k = 0; k < n; ++k) {
    if (k == 0 || keys[idx[k]] != keys[idx[k - 1]])
      ++c;
    cls[idx[k]] = c;
  }
  return cls;
}

int count_classes(const std::vector<int> &cls) {
  return cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
}

std::vector<int> refine(const MoleculeGraph &g, std::vector<int> cls) {
  const int n = static_cast<int>(g.num_atoms());
  int classes = count_classes(cls);
  while (true) {
    std::vector<Key> keys(n);
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<int, int>> nbs;
      for (const auto &nb : g.neighbors(i))
        nbs.emplace_back(cls[nb.atom], bond_code(g.bond(nb.bond)));
      std::sort(nbs.begin(), nbs.end());
      Key &k = keys[i];
      k.push_back(cls[i]);
      for (auto [c, b] : nbs) {
        k.push_back(c);
        k.push_back(b);
      }
    }
    auto next = rank_keys(keys);
    const int next_classes = count_classes(next);
    if (next_classes == classes)
      return next;
    cls = std::move(next);
    classes = next_classes;
  }
}

std::vector<int> initial_classes(const MoleculeGraph &g) {
  const int n = static_cast<int>(g.num_atoms());
  std::vector<Key> keys(n);
  for (int i = 0; i < n; ++i) {
    const Atom &a = g.atom(i);
    keys[i] = {a.wildcard ? 0 : a.atomic_number,
               a.isotope.value_or(0),
               a.charge,
               g.degree(i),
               a.total_h(),
               a.aromatic ? 1 : 0,
               a.atom_map};
  }
  return rank_keys(keys);
}

/// Splits `atom` off its tied class (it sorts first), then refines.
std::vector<int> split(const MoleculeGraph &g, const std::vector<int> &cls,
                       int atom) {
  std::vector<int> next(cls.size());
  for (std::size_t i = 0; i < cls.size(); ++i)
    next[i] = 2 * cls[i] + (static_cast<int>(i) == atom ? 0 : 1);
  // Re-densify before refining.
  std::vector<Key> keys(cls.size());
  for (std::size_t i = 0; i < cls.size(); ++i)
    keys[i] = {next[i]};
  return refine(g, rank_keys(keys));
}

/// Lowest class with more than one member, as its member list.
std::vector<int> first_tie(const std::vector<int> &cls) {
  const int n = static_cast<int>(cls.size());
  std::vector<int> count(n, 0);
  for (int c : cls)
    ++count[c];
  int target = -1;
  for (int c = 0; c < n; ++c) {
    if (count[c] > 1) {
      target = c;
      break;
    }
  }
  std::vector<int> members;
  if (target < 0)
    return members;
  for (int i = 0; i < n; ++i)
    if (cls[i] == target)
      members.push_back(i);
  return members;
}

bool has_stereo(const MoleculeGraph &g) {
  if (!g.double_bond_stereo().empty())
    return true;
  for (const auto &a : g.atoms())
    if (a.chiral != ChiralTag::kNone)
      return true;
  return false;
}

}  // namespace

std::vector<int> symmetry_classes(const MoleculeGraph &g) {
  return refine(g, initial_classes(g));
}

std::vector<int> canonical_ranks(const MoleculeGraph &g) {
  auto cls = symmetry_classes(g);
  while (true) {
    auto tie = first_tie(cls);
    if (tie.empty())
      return cls;
    cls = split(g, cls, tie.front());
  }
}

std::string write_canonical_smiles(const MoleculeGraph &g) {
  if (g.empty())
    return {};
  if (!has_stereo(g))
    return write_smiles(g, canonical_ranks(g));

  // With stereo, tied atoms may be related by a symmetry that flips a
  // parity, so every tie-break is explored and the smallest string kept.
  constexpr int kLeafBudget = 512;
  int leaves = 0;
  std::string best;
  std::function<void(const std::vector<int> &)> search =
      [&](const std::vector<int> &cls) {
        auto tie = first_tie(cls);
        if (tie.empty()) {
          ++leaves;
          std::string s = write_smiles(g, cls);
          if (best.empty() || s < best)
            best = std::move(s);
          return;
        }
        for (std::size_t k = 0; k < tie.size(); ++k) {
          if (k > 0 && leaves >= kLeafBudget)
            break;
          search(split(g, cls, tie[k]));
        }
      };
  search(symmetry_classes(g));
  return best;
}

}  // namespace chemeval::mol
