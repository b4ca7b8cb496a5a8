//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "chemeval/mol/element.h"
#include "chemeval/mol/perception.h"
#include "chemeval/mol/smiles.h"
#include "chemeval/mol/stereo.h"

namespace chemeval::mol {
namespace {

struct Closure {
  int bond;
  int partner;
  bool opening;
};

class Writer {
public:
  Writer(const MoleculeGraph &g, std::span<const int> ranks,
         const WriteOptions &options)
      : g_(g), ranks_(ranks), opt_(options) {
    const int n = static_cast<int>(g.num_atoms());
    if (static_cast<int>(ranks.size()) != n)
      throw MolError("rank vector does not match atom count");
    children_.resize(n);
    closures_.resize(n);
    parent_.assign(n, -1);
    position_.assign(n, -1);
    written_begin_.assign(g.num_bonds(), -1);
    marks_.assign(g.num_bonds(), BondMark::kNone);
  }

  std::string run() {
    const int n = static_cast<int>(g_.num_atoms());
    std::vector<int> by_rank(n);
    for (int i = 0; i < n; ++i)
      by_rank[i] = i;
    std::sort(by_rank.begin(), by_rank.end(),
              [&](int a, int b) { return ranks_[a] < ranks_[b]; });

    std::vector<int> roots;
    std::vector<char> bond_used(g_.num_bonds(), 0);
    for (int start : by_rank) {
      if (position_[start] >= 0)
        continue;
      roots.push_back(start);
      traverse(start, bond_used);
    }
    order_closures();
    if (opt_.stereo)
      assign_marks();

    std::string out;
    for (std::size_t k = 0; k < roots.size(); ++k) {
      if (k > 0)
        out += '.';
      emit(roots[k], out);
    }
    return out;
  }

private:
  std::vector<Neighbor> sorted_neighbors(int u) const {
    auto span = g_.neighbors(u);
    std::vector<Neighbor> nbs(span.begin(), span.end());
    std::sort(nbs.begin(), nbs.end(), [&](const Neighbor &a, const Neighbor &b) {
      return ranks_[a.atom] < ranks_[b.atom];
    });
    return nbs;
  }

  void traverse(int u, std::vector<char> &bond_used) {
    position_[u] = next_position_++;
    for (const auto &nb : sorted_neighbors(u)) {
      if (bond_used[nb.bond])
        continue;
      bond_used[nb.bond] = 1;
      if (position_[nb.atom] >= 0) {
        closures_[nb.atom].push_back({nb.bond, u, true});
        closures_[u].push_back({nb.bond, nb.atom, false});
        written_begin_[nb.bond] = nb.atom;
        continue;
      }
      children_[u].push_back(nb.atom);
      parent_[nb.atom] = u;
      written_begin_[nb.bond] = u;
      traverse(nb.atom, bond_used);
    }
  }

  // Closings first (in the order their digits were opened), then openings in
  // order of the partner's position.
  void order_closures() {
    for (auto &list : closures_) {
      std::stable_sort(list.begin(), list.end(),
                       [&](const Closure &a, const Closure &b) {
                         if (a.opening != b.opening)
                           return !a.opening;
                         return position_[a.partner] < position_[b.partner];
                       });
    }
  }

  std::vector<int> output_neighbor_order(int u) const {
    std::vector<int> order;
    if (parent_[u] >= 0)
      order.push_back(parent_[u]);
    if (g_.atom(u).total_h() > 0)
      order.push_back(kImplicitHydrogenRef);
    for (const auto &c : closures_[u])
      order.push_back(c.partner);
    for (int c : children_[u])
      order.push_back(c);
    return order;
  }

  bool writes_aromatic(int atom) const {
    return !opt_.kekule && g_.atom(atom).aromatic;
  }

  int written_order(const Bond &b) const {
    if (opt_.kekule)
      return b.valence_contribution();
    if (b.order == BondOrder::kAromatic)
      return 1;
    return static_cast<int>(b.order);
  }

  int default_h(int atom) const {
    const Atom &a = g_.atom(atom);
    int sum = 0;
    for (const auto &nb : g_.neighbors(atom))
      sum += written_order(g_.bond(nb.bond));
    if (writes_aromatic(atom)) {
      auto dv = default_valence(a.atomic_number);
      if (!dv)
        return -1;
      if (sum + 1 <= *dv)
        return *dv - sum - 1;
      if (sum <= *dv)
        return *dv - sum;
      return -1;
    }
    for (int v : allowed_valences(a.atomic_number, 0))
      if (v >= sum)
        return v - sum;
    return -1;
  }

  ChiralTag output_chirality(int u) const {
    const Atom &a = g_.atom(u);
    if (!opt_.stereo || a.chiral == ChiralTag::kNone)
      return ChiralTag::kNone;
    auto out = output_neighbor_order(u);
    auto stored = a.stereo_refs;
    auto a_sorted = out;
    auto b_sorted = stored;
    std::sort(a_sorted.begin(), a_sorted.end());
    std::sort(b_sorted.begin(), b_sorted.end());
    if (a_sorted != b_sorted ||
        std::adjacent_find(a_sorted.begin(), a_sorted.end()) != a_sorted.end())
      return ChiralTag::kNone;
    if (!odd_permutation(stored, out))
      return a.chiral;
    return a.chiral == ChiralTag::kClockwise ? ChiralTag::kCounterClockwise
                                             : ChiralTag::kClockwise;
  }

  void append_symbol(const Atom &a, bool aromatic, std::string &out) const {
    if (a.wildcard) {
      out += '*';
      return;
    }
    std::string sym(element_symbol(a.atomic_number));
    if (aromatic)
      sym[0] = static_cast<char>(sym[0] - 'A' + 'a');
    out += sym;
  }

  void append_atom(int u, std::string &out) const {
    const Atom &a = g_.atom(u);
    const bool aromatic = writes_aromatic(u);
    const ChiralTag chiral = output_chirality(u);
    const int map = opt_.atom_maps ? a.atom_map : 0;
    const bool organic = !a.wildcard && is_organic_subset(a.atomic_number) &&
                         a.charge == 0 && !a.isotope &&
                         chiral == ChiralTag::kNone && map == 0 &&
                         default_h(u) == a.total_h();
    if (organic) {
      append_symbol(a, aromatic, out);
      return;
    }
    out += '[';
    if (a.isotope)
      out += std::to_string(*a.isotope);
    append_symbol(a, aromatic, out);
    if (chiral == ChiralTag::kCounterClockwise)
      out += '@';
    else if (chiral == ChiralTag::kClockwise)
      out += "@@";
    if (a.total_h() > 0) {
      out += 'H';
      if (a.total_h() > 1)
        out += std::to_string(a.total_h());
    }
    if (a.charge != 0) {
      out += a.charge > 0 ? '+' : '-';
      if (std::abs(a.charge) > 1)
        out += std::to_string(std::abs(a.charge));
    }
    if (map != 0) {
      out += ':';
      out += std::to_string(map);
    }
    out += ']';
  }

  void append_bond(int bond, std::string &out) const {
    const Bond &b = g_.bond(bond);
    if (marks_[bond] != BondMark::kNone) {
      out += marks_[bond] == BondMark::kUp ? '/' : '\\';
      return;
    }
    if (opt_.kekule) {
      const int k = b.valence_contribution();
      if (k == 2)
        out += '=';
      else if (k == 3)
        out += '#';
      return;
    }
    switch (b.order) {
    case BondOrder::kSingle:
      if (g_.atom(b.begin).aromatic && g_.atom(b.end).aromatic)
        out += '-';
      break;
    case BondOrder::kDouble: out += '='; break;
    case BondOrder::kTriple: out += '#'; break;
    case BondOrder::kAromatic:
      if (!g_.atom(b.begin).aromatic || !g_.atom(b.end).aromatic)
        out += ':';
      break;
    }
  }

  static void append_digit(int d, std::string &out) {
    if (d < 10) {
      out += static_cast<char>('0' + d);
    } else {
      out += '%';
      out += std::to_string(d);
    }
  }

  int allocate_digit() {
    for (int d = 1;; ++d) {
      if (std::find(digits_in_use_.begin(), digits_in_use_.end(), d) ==
          digits_in_use_.end()) {
        digits_in_use_.push_back(d);
        return d;
      }
    }
  }

  void emit(int u, std::string &out) {
    append_atom(u, out);
    std::vector<int> released;
    for (const auto &c : closures_[u]) {
      if (c.opening) {
        const int d = allocate_digit();
        digit_of_bond_[c.bond] = d;
        append_bond(c.bond, out);
        append_digit(d, out);
      } else {
        const int d = digit_of_bond_.at(c.bond);
        append_digit(d, out);
        released.push_back(d);
      }
    }
    for (int d : released)
      digits_in_use_.erase(
          std::find(digits_in_use_.begin(), digits_in_use_.end(), d));

    const auto &kids = children_[u];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const int v = kids[k];
      const bool branch = k + 1 < kids.size();
      if (branch)
        out += '(';
      append_bond(g_.bond_between(u, v), out);
      emit(v, out);
      if (branch)
        out += ')';
    }
  }

  int side_of(int bond, int center) const {
    if (marks_[bond] == BondMark::kNone)
      return 0;
    const int m = marks_[bond] == BondMark::kUp ? 1 : -1;
    return written_begin_[bond] == center ? m : -m;
  }

  BondMark mark_for(int bond, int center, int side) const {
    const int m = written_begin_[bond] == center ? side : -side;
    return m > 0 ? BondMark::kUp : BondMark::kDown;
  }

  std::vector<Neighbor> mark_candidates(int center, int across) const {
    std::vector<Neighbor> out;
    for (const auto &nb : g_.neighbors(center)) {
      if (nb.atom == across)
        continue;
      if (g_.bond(nb.bond).order != BondOrder::kSingle)
        continue;
      out.push_back(nb);
    }
    std::sort(out.begin(), out.end(), [&](const Neighbor &a, const Neighbor &b) {
      return position_[a.atom] < position_[b.atom];
    });
    return out;
  }

  void assign_marks() {
    auto stereo = g_.double_bond_stereo();
    auto first_pos = [&](const DoubleBondStereo &s) {
      const Bond &b = g_.bond(s.bond);
      return std::min(position_[b.begin], position_[b.end]);
    };
    std::sort(stereo.begin(), stereo.end(),
              [&](const DoubleBondStereo &x, const DoubleBondStereo &y) {
                return first_pos(x) < first_pos(y);
              });
    for (const auto &s : stereo) {
      const Bond &db = g_.bond(s.bond);
      if (db.order != BondOrder::kDouble)
        continue;
      const int a = db.begin, b = db.end;
      const auto ca = mark_candidates(a, b);
      const auto cb = mark_candidates(b, a);
      auto has_ref = [](const std::vector<Neighbor> &c, int ref) {
        return std::any_of(c.begin(), c.end(),
                           [&](const Neighbor &n) { return n.atom == ref; });
      };
      if (!has_ref(ca, s.begin_ref) || !has_ref(cb, s.end_ref))
        continue;

      auto any_marked = [&](const std::vector<Neighbor> &c, int center) {
        return std::any_of(c.begin(), c.end(), [&](const Neighbor &n) {
          return side_of(n.bond, center) != 0;
        });
      };
      // With nothing fixed yet, pick the orientation whose first written
      // mark is '/' so the output does not depend on the stored references.
      int first = 1;
      if (!any_marked(ca, a) && !any_marked(cb, b)) {
        const bool a_first = position_[a] < position_[b];
        const auto &n = a_first ? ca.front() : cb.front();
        const int center = a_first ? a : b;
        const int ref = a_first ? s.begin_ref : s.end_ref;
        const int t = a_first ? 1 : (s.cis ? 1 : -1);
        if (mark_for(n.bond, center, n.atom == ref ? t : -t) != BondMark::kUp)
          first = -1;
      }
      for (int ta : {first, -first}) {
        const int tb = s.cis ? ta : -ta;
        auto consistent = [&](const std::vector<Neighbor> &c, int center,
                              int ref, int t) {
          for (const auto &n : c) {
            const int side = side_of(n.bond, center);
            if (side != 0 && side != (n.atom == ref ? t : -t))
              return false;
          }
          return true;
        };
        if (!consistent(ca, a, s.begin_ref, ta) ||
            !consistent(cb, b, s.end_ref, tb))
          continue;
        auto ensure = [&](const std::vector<Neighbor> &c, int center, int ref,
                          int t) {
          for (const auto &n : c)
            if (side_of(n.bond, center) != 0)
              return;
          const auto &n = c.front();
          marks_[n.bond] = mark_for(n.bond, center, n.atom == ref ? t : -t);
        };
        ensure(ca, a, s.begin_ref, ta);
        ensure(cb, b, s.end_ref, tb);
        break;
      }
    }
  }

  const MoleculeGraph &g_;
  std::span<const int> ranks_;
  WriteOptions opt_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<Closure>> closures_;
  std::vector<int> parent_;
  std::vector<int> position_;
  std::vector<int> written_begin_;
  std::vector<BondMark> marks_;
  std::vector<int> digits_in_use_;
  std::map<int, int> digit_of_bond_;
  int next_position_ = 0;
};

}  // namespace

std::string write_smiles(const MoleculeGraph &g, std::span<const int> ranks,
                         const WriteOptions &options) {
  return Writer(g, ranks, options).run();
}

MoleculeGraph prepare(const MoleculeGraph &parsed) {
  return perceive_aromaticity(assign_implicit_hydrogens(parsed));
}

std::string canonical_smiles(std::string_view text) {
  return write_canonical_smiles(prepare(parse_smiles(text)));
}

}  // namespace chemeval::mol
