//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_MOL_MOLECULE_H_
#define CHEMEVAL_MOL_MOLECULE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chemeval::mol {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

/// @ is counterclockwise, @@ clockwise, both relative to the stored
/// neighbour order of the atom.
enum class ChiralTag : std::uint8_t { kNone, kCounterClockwise, kClockwise };

/// Double-bond geometry mark on a single bond, read in the direction
/// begin -> end.
enum class BondMark : std::uint8_t { kNone, kUp, kDown };

/// Placeholder in Atom::stereo_refs for the bracket hydrogen.
constexpr int kImplicitHydrogenRef = -1;

struct Atom {
  int atomic_number = 6;
  int charge = 0;
  std::optional<int> isotope;
  int explicit_h = 0;
  int implicit_h = 0;
  bool aromatic = false;
  bool bracket = false;
  ChiralTag chiral = ChiralTag::kNone;
  // Neighbour order the chiral tag refers to (atom indices, or
  // kImplicitHydrogenRef). Empty unless chiral is set.
  std::vector<int> stereo_refs;
  int atom_map = 0;
  // Pattern-only fields: '*' (any atom), [#n] (element regardless of
  // aromaticity) and whether a bracket spelled out its hydrogen count.
  bool wildcard = false;
  bool any_aromaticity = false;
  bool h_written = false;
  // Set when no allowed valence could accommodate the bonds during hydrogen
  // assignment.
  bool valence_unresolved = false;
  // Lowercase in the source text, regardless of later perception.
  bool declared_aromatic = false;

  int total_h() const { return explicit_h + implicit_h; }
  std::string_view symbol() const;
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::kSingle;
  BondMark mark = BondMark::kNone;
  // Resolved localized order (1, 2 or 3); 0 while an aromatic bond has not
  // been kekulized.
  int kekule = 0;
  bool in_ring = false;

  int other(int atom) const { return atom == begin ? end : begin; }
  /// Localized order, falling back to 1 for unresolved aromatic bonds.
  int valence_contribution() const;
};

struct Neighbor {
  int atom;
  int bond;
};

/// Geometry of one double bond, expressed against one reference neighbour on
/// each end.
struct DoubleBondStereo {
  int bond = -1;
  int begin_ref = -1;  // neighbour of bonds()[bond].begin
  int end_ref = -1;    // neighbour of bonds()[bond].end
  bool cis = false;
};

class MolError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Attributed molecular graph. Built incrementally by the parser and the
/// graph-rewriting operations; treated as an immutable value afterwards.
class MoleculeGraph {
public:
  MoleculeGraph() = default;

  int add_atom(Atom atom);
  /// Throws MolError on self-loops, out-of-range indices or duplicate bonds.
  int add_bond(int a, int b, BondOrder order, BondMark mark = BondMark::kNone);

  std::size_t num_atoms() const { return atoms_.size(); }
  std::size_t num_bonds() const { return bonds_.size(); }
  bool empty() const { return atoms_.empty(); }

  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<Bond> &bonds() const { return bonds_; }
  const Atom &atom(int i) const { return atoms_[i]; }
  const Bond &bond(int i) const { return bonds_[i]; }
  Atom &mutable_atom(int i) { return atoms_[i]; }
  Bond &mutable_bond(int i) { return bonds_[i]; }

  std::span<const Neighbor> neighbors(int atom) const { return adj_[atom]; }
  int degree(int atom) const { return static_cast<int>(adj_[atom].size()); }
  /// Bond index joining a and b, or -1.
  int bond_between(int a, int b) const;

  /// Number of connected components.
  int fragment_count() const;
  /// Component index per atom, numbered in order of first appearance.
  std::vector<int> fragment_ids() const;

  /// Smallest set of smallest rings; filled by perceive_rings().
  const std::vector<std::vector<int>> &rings() const { return rings_; }
  void set_rings(std::vector<std::vector<int>> rings) {
    rings_ = std::move(rings);
  }

  const std::vector<DoubleBondStereo> &double_bond_stereo() const {
    return db_stereo_;
  }
  void set_double_bond_stereo(std::vector<DoubleBondStereo> s) {
    db_stereo_ = std::move(s);
  }

  /// Sum of localized bond orders at an atom (unresolved aromatic bonds count
  /// as 1).
  int bond_order_sum(int atom) const;
  int heavy_degree(int atom) const;

  /// Graph restricted to the given atoms (in the given order). Bonds whose
  /// endpoints are both kept survive; stereo that refers to dropped atoms is
  /// cleared.
  MoleculeGraph subgraph(std::span<const int> keep) const;

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adj_;
  std::vector<std::vector<int>> rings_;
  std::vector<DoubleBondStereo> db_stereo_;
};

/// Heavy-atom element counts, keyed by atomic number (hydrogen excluded,
/// including explicit [H] atoms).
std::vector<int> heavy_atom_composition(const MoleculeGraph &g);

}  // namespace chemeval::mol

#endif  // CHEMEVAL_MOL_MOLECULE_H_
