//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "chemeval/mol/perception.h"

namespace chemeval::mol {
namespace {

using EdgeSet = std::vector<std::uint64_t>;

struct Candidate {
  EdgeSet edges;
  std::vector<int> atoms;
  int size;
};

void set_bit(EdgeSet &s, int i) { s[i / 64] |= std::uint64_t{1} << (i % 64); }
bool test_bit(const EdgeSet &s, int i) { return (s[i / 64] >> (i % 64)) & 1; }

void xor_into(EdgeSet &dst, const EdgeSet &src) {
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] ^= src[i];
}

int lowest_bit(const EdgeSet &s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != 0)
      return static_cast<int>(i * 64) + __builtin_ctzll(s[i]);
  return -1;
}

/// Incremental GF(2) basis keyed by pivot bit.
class Basis {
public:
  explicit Basis(int nbits) : pivots_(nbits, -1) { }

  EdgeSet reduce(EdgeSet v) const {
    for (int p = lowest_bit(v); p >= 0;) {
      if (pivots_[p] < 0)
        return v;
      xor_into(v, rows_[pivots_[p]]);
      p = lowest_bit(v);
    }
    return v;
  }

  bool independent(const EdgeSet &v) const {
    return lowest_bit(reduce(v)) >= 0;
  }

  bool add(const EdgeSet &v) {
    EdgeSet r = reduce(v);
    int p = lowest_bit(r);
    if (p < 0)
      return false;
    // Keep rows fully reduced against the new pivot so reduce() stays a
    // single pass per pivot.
    for (auto &row : rows_)
      if (test_bit(row, p))
        xor_into(row, r);
    pivots_[p] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }

private:
  std::vector<int> pivots_;
  std::vector<EdgeSet> rows_;
};

std::vector<bool> find_ring_bonds(const MoleculeGraph &g) {
  const int n = static_cast<int>(g.num_atoms());
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<bool> ring(g.num_bonds(), true);
  int timer = 0;

  // Iterative Tarjan bridge search.
  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  for (int s = 0; s < n; ++s) {
    if (disc[s] >= 0)
      continue;
    std::vector<Frame> stack{{s, -1, 0}};
    disc[s] = low[s] = timer++;
    while (!stack.empty()) {
      Frame &f = stack.back();
      auto nbs = g.neighbors(f.atom);
      if (f.next < nbs.size()) {
        const Neighbor nb = nbs[f.next++];
        if (nb.bond == f.parent_bond)
          continue;
        if (disc[nb.atom] < 0) {
          disc[nb.atom] = low[nb.atom] = timer++;
          stack.push_back({nb.atom, nb.bond, 0});
        } else {
          low[f.atom] = std::min(low[f.atom], disc[nb.atom]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        Frame &parent = stack.back();
        low[parent.atom] = std::min(low[parent.atom], low[done.atom]);
        if (low[done.atom] > disc[parent.atom])
          ring[done.parent_bond] = false;
      }
    }
  }
  return ring;
}

}  // namespace

std::vector<bool> ring_bond_mask(const MoleculeGraph &g) {
  return find_ring_bonds(g);
}

RingSet perceive_rings(const MoleculeGraph &g) {
  const int n = static_cast<int>(g.num_atoms());
  const int m = static_cast<int>(g.num_bonds());
  RingSet result;
  const std::vector<bool> ring_bond = find_ring_bonds(g);

  int cyclic_edges = 0;
  std::vector<bool> cyclic_atom(n, false);
  for (int b = 0; b < m; ++b) {
    if (!ring_bond[b])
      continue;
    ++cyclic_edges;
    cyclic_atom[g.bond(b).begin] = true;
    cyclic_atom[g.bond(b).end] = true;
  }
  if (cyclic_edges == 0)
    return result;

  // Cycle-space dimension of the ring-bond subgraph.
  int cyclic_atoms = 0;
  int components = 0;
  {
    std::vector<bool> seen(n, false);
    for (int s = 0; s < n; ++s) {
      if (!cyclic_atom[s] || seen[s])
        continue;
      ++components;
      std::vector<int> stack{s};
      seen[s] = true;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        ++cyclic_atoms;
        for (const auto &nb : g.neighbors(u)) {
          if (ring_bond[nb.bond] && !seen[nb.atom]) {
            seen[nb.atom] = true;
            stack.push_back(nb.atom);
          }
        }
      }
    }
  }
  const int dimension = cyclic_edges - cyclic_atoms + components;
  const int words = (m + 63) / 64;

  // Horton candidates: for every root r and ring edge (x, y), the cycle
  // P(r, x) + (x, y) + P(y, r) when the two tree paths only share r.
  std::vector<Candidate> candidates;
  std::vector<int> dist(n), parent_atom(n), parent_bond(n);
  std::vector<int> mark(n, 0), px, py;
  int stamp = 0;
  for (int r = 0; r < n; ++r) {
    if (!cyclic_atom[r])
      continue;
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent_atom.begin(), parent_atom.end(), -1);
    std::fill(parent_bond.begin(), parent_bond.end(), -1);
    std::queue<int> q;
    dist[r] = 0;
    q.push(r);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const auto &nb : g.neighbors(u)) {
        if (!ring_bond[nb.bond] || dist[nb.atom] >= 0)
          continue;
        dist[nb.atom] = dist[u] + 1;
        parent_atom[nb.atom] = u;
        parent_bond[nb.atom] = nb.bond;
        q.push(nb.atom);
      }
    }

    for (int b = 0; b < m; ++b) {
      if (!ring_bond[b])
        continue;
      int x = g.bond(b).begin, y = g.bond(b).end;
      if (dist[x] < 0 || dist[y] < 0)
        continue;
      if (parent_bond[x] == b || parent_bond[y] == b)
        continue;
      if (std::abs(dist[x] - dist[y]) > 1)
        continue;
      // Paths must meet only at the root.
      ++stamp;
      for (int v = x; v != r; v = parent_atom[v])
        mark[v] = stamp;
      bool disjoint = true;
      for (int v = y; v != r && disjoint; v = parent_atom[v])
        disjoint = mark[v] != stamp;
      if (!disjoint)
        continue;
      px.clear();
      py.clear();
      for (int v = x; v >= 0; v = parent_atom[v])
        px.push_back(v);  // x ... r
      for (int v = y; v >= 0; v = parent_atom[v])
        py.push_back(v);

      Candidate c;
      c.edges.assign(words, 0);
      set_bit(c.edges, b);
      for (int v : px)
        if (parent_bond[v] >= 0)
          set_bit(c.edges, parent_bond[v]);
      for (int v : py)
        if (parent_bond[v] >= 0)
          set_bit(c.edges, parent_bond[v]);
      // Cycle order: r ... x, y ... (back towards r).
      c.atoms.assign(px.rbegin(), px.rend());
      for (std::size_t i = 0; i + 1 < py.size(); ++i)
        c.atoms.push_back(py[i]);
      c.size = static_cast<int>(c.atoms.size());
      candidates.push_back(std::move(c));
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &a, const Candidate &b) {
              if (a.size != b.size)
                return a.size < b.size;
              return a.edges < b.edges;
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const Candidate &a, const Candidate &b) {
                                 return a.edges == b.edges;
                               }),
                   candidates.end());

  // Canonical rotation so that ring atom lists do not depend on which root
  // produced the candidate: start at the smallest index, go towards the
  // smaller neighbour.
  auto normalize = [](std::vector<int> atoms) {
    auto it = std::min_element(atoms.begin(), atoms.end());
    std::rotate(atoms.begin(), it, atoms.end());
    if (atoms.size() > 2 && atoms.back() < atoms[1])
      std::reverse(atoms.begin() + 1, atoms.end());
    return atoms;
  };

  Basis sssr_basis(m);
  Basis shorter(m);
  std::size_t i = 0;
  while (i < candidates.size()) {
    std::size_t j = i;
    while (j < candidates.size() && candidates[j].size == candidates[i].size)
      ++j;
    for (std::size_t k = i; k < j; ++k)
      if (shorter.independent(candidates[k].edges))
        result.relevant.push_back(normalize(candidates[k].atoms));
    for (std::size_t k = i; k < j; ++k) {
      if (static_cast<int>(result.sssr.size()) < dimension &&
          sssr_basis.add(candidates[k].edges))
        result.sssr.push_back(normalize(candidates[k].atoms));
      shorter.add(candidates[k].edges);
    }
    i = j;
  }

  if (static_cast<int>(result.sssr.size()) < dimension) {
    // Defensive completion with fundamental cycles; not expected for
    // Horton candidate sets.
    std::vector<int> tree_parent(n, -1), tree_bond(n, -1), depth(n, -1);
    for (int s = 0; s < n; ++s) {
      if (!cyclic_atom[s] || depth[s] >= 0)
        continue;
      depth[s] = 0;
      std::vector<int> stack{s};
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (const auto &nb : g.neighbors(u)) {
          if (!ring_bond[nb.bond] || depth[nb.atom] >= 0)
            continue;
          depth[nb.atom] = depth[u] + 1;
          tree_parent[nb.atom] = u;
          tree_bond[nb.atom] = nb.bond;
          stack.push_back(nb.atom);
        }
      }
    }
    for (int b = 0; b < m && static_cast<int>(result.sssr.size()) < dimension;
         ++b) {
      if (!ring_bond[b])
        continue;
      int x = g.bond(b).begin, y = g.bond(b).end;
      if (tree_bond[x] == b || tree_bond[y] == b)
        continue;
      EdgeSet e(words, 0);
      set_bit(e, b);
      std::vector<int> left{x}, right{y};
      int a = x, c = y;
      while (a != c) {
        if (depth[a] >= depth[c]) {
          set_bit(e, tree_bond[a]);
          a = tree_parent[a];
          left.push_back(a);
        } else {
          set_bit(e, tree_bond[c]);
          c = tree_parent[c];
          right.push_back(c);
        }
      }
      right.pop_back();
      std::vector<int> atoms = left;
      atoms.insert(atoms.end(), right.rbegin(), right.rend());
      if (sssr_basis.add(e))
        result.sssr.push_back(normalize(atoms));
    }
  }
  return result;
}

MoleculeGraph with_rings(const MoleculeGraph &g) {
  MoleculeGraph out = g;
  const auto mask = find_ring_bonds(g);
  for (int b = 0; b < static_cast<int>(out.num_bonds()); ++b)
    out.mutable_bond(b).in_ring = mask[b];
  out.set_rings(perceive_rings(g).sssr);
  return out;
}

}  // namespace chemeval::mol
