//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/mol/stereo.h"

#include <algorithm>

namespace chemeval::mol {

int mark_side(const Bond &bond, int center) {
  if (bond.mark == BondMark::kNone)
    return 0;
  const int up = bond.mark == BondMark::kUp ? 1 : -1;
  // "A/N": N sits above A. "N/A": N sits below A.
  return bond.begin == center ? up : -up;
}

namespace {

bool is_plain_double(const Bond &b) {
  return b.order == BondOrder::kDouble;
}

}  // namespace

BondMarkAnalysis analyze_bond_marks(const MoleculeGraph &g) {
  BondMarkAnalysis out;
  std::vector<bool> mark_used(g.num_bonds(), false);

  for (int bi = 0; bi < static_cast<int>(g.num_bonds()); ++bi) {
    const Bond &db = g.bond(bi);
    if (!is_plain_double(db))
      continue;

    int ref[2] = {-1, -1};
    int side[2] = {0, 0};
    bool conflict = false;
    const int ends[2] = {db.begin, db.end};
    for (int e = 0; e < 2; ++e) {
      const int center = ends[e];
      int up = 0;
      int down = 0;
      for (const auto &nb : g.neighbors(center)) {
        if (nb.bond == bi)
          continue;
        const Bond &sb = g.bond(nb.bond);
        const int s = mark_side(sb, center);
        if (s == 0)
          continue;
        mark_used[nb.bond] = true;
        (s > 0 ? up : down) += 1;
        if (ref[e] < 0) {
          ref[e] = nb.atom;
          side[e] = s;
        }
      }
      if (up > 1 || down > 1)
        conflict = true;
    }

    if (conflict) {
      out.conflicting.push_back(bi);
      continue;
    }
    if (ref[0] < 0 && ref[1] < 0)
      continue;
    if (ref[0] < 0 || ref[1] < 0) {
      out.one_sided.push_back(bi);
      continue;
    }
    DoubleBondStereo s;
    s.bond = bi;
    s.begin_ref = ref[0];
    s.end_ref = ref[1];
    s.cis = side[0] == side[1];
    out.stereo.push_back(s);
  }

  for (int bi = 0; bi < static_cast<int>(g.num_bonds()); ++bi)
    if (g.bond(bi).mark != BondMark::kNone && !mark_used[bi])
      out.orphan_marks.push_back(bi);
  return out;
}

bool odd_permutation(std::vector<int> from, const std::vector<int> &to) {
  // Count transpositions needed to turn `from` into `to`.
  int swaps = 0;
  for (std::size_t i = 0; i < to.size() && i < from.size(); ++i) {
    if (from[i] == to[i])
      continue;
    auto it = std::find(from.begin() + static_cast<long>(i) + 1, from.end(),
                        to[i]);
    if (it == from.end())
      return false;
    std::iter_swap(from.begin() + static_cast<long>(i), it);
    ++swaps;
  }
  return (swaps % 2) == 1;
}

}  // namespace chemeval::mol
