//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/validity/validity.h"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "chemeval/mol/element.h"
#include "chemeval/mol/perception.h"
#include "chemeval/mol/smiles.h"
#include "chemeval/mol/stereo.h"

namespace chemeval::validity {

using mol::Atom;
using mol::Bond;
using mol::BondOrder;
using mol::MoleculeGraph;

std::string_view to_string(Stage stage) {
  switch (stage) {
  case Stage::kSyntax: return "syntax";
  case Stage::kPossibility: return "possibility";
  case Stage::kSanity: return "sanity";
  case Stage::kValid: return "valid";
  }
  return "";
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::kInvalidSyntax: return "invalid_syntax";
  case ErrorCode::kMismatchedBrackets: return "mismatched_brackets";
  case ErrorCode::kRingClosureError: return "ring_closure_error";
  case ErrorCode::kInvalidIsotope: return "invalid_isotope";
  case ErrorCode::kIncorrectValence: return "incorrect_valence";
  case ErrorCode::kIncorrectAromaticity: return "incorrect_aromaticity";
  case ErrorCode::kInvalidStereochemistry: return "invalid_stereochemistry";
  case ErrorCode::kStrainViolation: return "strain_violation";
  }
  return "";
}

std::string Locus::str() const {
  switch (kind) {
  case Kind::kNone: return "";
  case Kind::kPosition: return "pos:" + std::to_string(index);
  case Kind::kAtom: return "atom:" + std::to_string(index);
  case Kind::kBond: return "bond:" + std::to_string(index);
  }
  return "";
}

bool ValidityReport::has(ErrorCode code) const {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const ValidityError &e) { return e.code == code; });
}

namespace {

ErrorCode syntax_code(mol::SyntaxErrorKind kind) {
  switch (kind) {
  case mol::SyntaxErrorKind::kMismatchedBrackets:
    return ErrorCode::kMismatchedBrackets;
  case mol::SyntaxErrorKind::kRingClosure: return ErrorCode::kRingClosureError;
  case mol::SyntaxErrorKind::kMalformedIsotope:
    return ErrorCode::kInvalidIsotope;
  default: return ErrorCode::kInvalidSyntax;
  }
}

std::string atom_label(const MoleculeGraph &g, int i) {
  const Atom &a = g.atom(i);
  return std::string(a.symbol()) + " atom " + std::to_string(i);
}

std::vector<ValidityError> check_isotopes(const MoleculeGraph &g) {
  std::vector<ValidityError> out;
  for (int i = 0; i < static_cast<int>(g.num_atoms()); ++i) {
    const Atom &a = g.atom(i);
    if (!a.isotope || a.wildcard)
      continue;
    const int z = a.atomic_number;
    if (*a.isotope < z || *a.isotope > 3 * z + 20)
      out.push_back({ErrorCode::kInvalidIsotope, Locus::atom(i),
                     "mass number " + std::to_string(*a.isotope) +
                         " outside plausible range for " + atom_label(g, i)});
  }
  return out;
}

std::vector<ValidityError> check_valences(const MoleculeGraph &g,
                                          const std::set<int> &skip) {
  std::vector<ValidityError> out;
  for (int i = 0; i < static_cast<int>(g.num_atoms()); ++i) {
    const Atom &a = g.atom(i);
    if (a.wildcard || skip.count(i) || !mol::has_valence_rule(a.atomic_number))
      continue;
    const int v = g.bond_order_sum(i) + a.total_h();
    const auto allowed = mol::allowed_valences(a.atomic_number, a.charge);
    bool ok = !a.valence_unresolved &&
              std::find(allowed.begin(), allowed.end(), v) != allowed.end();
    // Bracket atoms below their lowest valence are radicals, not errors.
    if (!ok && a.bracket && !allowed.empty() && v < allowed.front())
      ok = true;
    if (!ok)
      out.push_back({ErrorCode::kIncorrectValence, Locus::atom(i),
                     atom_label(g, i) + " has valence " + std::to_string(v)});
  }
  return out;
}

/// Canonical text of the branch hanging off `center` through `nb`, or empty
/// when the bond is in a ring (ring paths always count as distinct).
std::string substituent_key(const MoleculeGraph &g, int center, int nb) {
  const int bond = g.bond_between(center, nb);
  if (g.bond(bond).in_ring)
    return {};
  const Atom &root = g.atom(nb);
  if (root.atomic_number == 1 && g.degree(nb) == 1 && !root.isotope &&
      root.charge == 0)
    return "H";

  std::vector<int> keep{nb};
  std::vector<char> seen(g.num_atoms(), 0);
  seen[nb] = seen[center] = 1;
  for (std::size_t h = 0; h < keep.size(); ++h)
    for (const auto &n : g.neighbors(keep[h]))
      if (!seen[n.atom]) {
        seen[n.atom] = 1;
        keep.push_back(n.atom);
      }
  MoleculeGraph sub = g.subgraph(keep);
  for (int i = 0; i < static_cast<int>(sub.num_atoms()); ++i)
    sub.mutable_atom(i).atom_map = i == 0 ? 1 : 0;
  return std::to_string(static_cast<int>(g.bond(bond).order)) + ":" +
         mol::write_canonical_smiles(sub);
}

bool has_duplicate(std::vector<std::string> keys) {
  keys.erase(std::remove(keys.begin(), keys.end(), std::string()), keys.end());
  std::sort(keys.begin(), keys.end());
  return std::adjacent_find(keys.begin(), keys.end()) != keys.end();
}

/// True when one end of a double bond cannot carry a geometry.
bool end_is_degenerate(const MoleculeGraph &g, int center, int across) {
  const Atom &a = g.atom(center);
  if (a.total_h() >= 2)
    return true;
  std::vector<std::string> keys;
  for (const auto &n : g.neighbors(center))
    if (n.atom != across)
      keys.push_back(substituent_key(g, center, n.atom));
  if (keys.empty() && a.total_h() == 0)
    return true;
  if (a.total_h() == 1)
    keys.push_back("H");
  return keys.size() == 2 && has_duplicate(keys);
}

/// Smallest cycle through bond `b` in cycle order, starting at its begin
/// atom and ending at its end atom; empty when the bond is acyclic.
std::vector<int> smallest_ring_with_bond(const MoleculeGraph &g, int b) {
  const Bond &bond = g.bond(b);
  std::vector<int> parent(g.num_atoms(), -2);
  std::vector<int> queue{bond.begin};
  parent[bond.begin] = -1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (const auto &nb : g.neighbors(u)) {
      if (nb.bond == b || parent[nb.atom] != -2)
        continue;
      parent[nb.atom] = u;
      if (nb.atom == bond.end) {
        std::vector<int> ring;
        for (int x = bond.end; x >= 0; x = parent[x])
          ring.push_back(x);
        std::reverse(ring.begin(), ring.end());
        return ring;
      }
      queue.push_back(nb.atom);
    }
  }
  return {};
}

/// Neighbour of `center` on `ring` other than `across`.
int ring_neighbor(const std::vector<int> &ring, int center, int across) {
  const std::size_t n = ring.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (ring[k] != center)
      continue;
    const int prev = ring[(k + n - 1) % n], next = ring[(k + 1) % n];
    return prev == across ? next : prev;
  }
  return -1;
}

}  // namespace

std::vector<ValidityError> check_stereo_notation(const MoleculeGraph &g) {
  std::vector<ValidityError> out;
  for (int i = 0; i < static_cast<int>(g.num_atoms()); ++i) {
    const Atom &a = g.atom(i);
    if (a.chiral == mol::ChiralTag::kNone)
      continue;
    const int count = g.degree(i) + a.total_h();
    if (count < 3) {
      out.push_back({ErrorCode::kInvalidStereochemistry, Locus::atom(i),
                     "chiral tag on " + atom_label(g, i) + " with " +
                         std::to_string(count) + " neighbours"});
      continue;
    }
    std::vector<std::string> keys;
    for (const auto &n : g.neighbors(i))
      keys.push_back(substituent_key(g, i, n.atom));
    for (int h = 0; h < a.total_h(); ++h)
      keys.push_back("H");
    if (has_duplicate(keys))
      out.push_back({ErrorCode::kInvalidStereochemistry, Locus::atom(i),
                     "chiral tag on " + atom_label(g, i) +
                         " with identical substituents"});
  }

  const auto marks = mol::analyze_bond_marks(g);
  for (int b : marks.conflicting)
    out.push_back({ErrorCode::kInvalidStereochemistry, Locus::bond(b),
                   "contradictory geometry marks on double bond " +
                       std::to_string(b)});
  std::vector<int> marked;
  for (const auto &s : marks.stereo)
    marked.push_back(s.bond);
  marked.insert(marked.end(), marks.one_sided.begin(), marks.one_sided.end());
  std::sort(marked.begin(), marked.end());
  for (int b : marked) {
    const Bond &db = g.bond(b);
    if (end_is_degenerate(g, db.begin, db.end) ||
        end_is_degenerate(g, db.end, db.begin))
      out.push_back({ErrorCode::kInvalidStereochemistry, Locus::bond(b),
                     "geometry marks on double bond " + std::to_string(b) +
                         " which has no geometric isomers"});
  }
  for (int b : marks.orphan_marks)
    out.push_back({ErrorCode::kInvalidStereochemistry, Locus::bond(b),
                   "geometry mark on bond " + std::to_string(b) +
                       " not adjacent to a double bond"});
  return out;
}

std::vector<ValidityError> check_ring_strain(const MoleculeGraph &g) {
  constexpr std::size_t kMinRelaxedRing = 8;
  std::vector<ValidityError> out;

  for (int b = 0; b < static_cast<int>(g.num_bonds()); ++b) {
    const Bond &bond = g.bond(b);
    if (bond.order != BondOrder::kTriple || !bond.in_ring)
      continue;
    const auto ring = smallest_ring_with_bond(g, b);
    if (!ring.empty() && ring.size() < kMinRelaxedRing)
      out.push_back({ErrorCode::kStrainViolation, Locus::bond(b),
                     "triple bond in a " + std::to_string(ring.size()) +
                         "-membered ring"});
  }
  for (const auto &s : g.double_bond_stereo()) {
    const Bond &bond = g.bond(s.bond);
    if (!bond.in_ring)
      continue;
    const auto ring = smallest_ring_with_bond(g, s.bond);
    if (ring.empty() || ring.size() >= kMinRelaxedRing)
      continue;
    const int ra = ring_neighbor(ring, bond.begin, bond.end);
    const int rb = ring_neighbor(ring, bond.end, bond.begin);
    const bool ring_cis =
        s.cis ^ (s.begin_ref != ra) ^ (s.end_ref != rb);
    if (!ring_cis)
      out.push_back({ErrorCode::kStrainViolation, Locus::bond(s.bond),
                     "trans double bond in a " + std::to_string(ring.size()) +
                         "-membered ring"});
  }
  return out;
}

ValidityReport validate(std::string_view text) {
  ValidityReport r;
  r.input = std::string(text);

  MoleculeGraph parsed;
  try {
    parsed = mol::parse_smiles(text);
  } catch (const mol::SyntaxError &e) {
    r.stage = Stage::kSyntax;
    r.errors.push_back({syntax_code(e.kind()),
                        Locus::position(static_cast<int>(e.position())),
                        e.what()});
    return r;
  } catch (const mol::MolError &e) {
    r.stage = Stage::kSyntax;
    r.errors.push_back({ErrorCode::kInvalidSyntax, {}, e.what()});
    return r;
  }

  const MoleculeGraph with_h = mol::assign_implicit_hydrogens(parsed);
  auto aromatic = mol::perceive_aromaticity_checked(with_h);
  std::vector<ValidityError> possible = check_isotopes(with_h);
  const std::set<int> failed(aromatic.failed_atoms.begin(),
                             aromatic.failed_atoms.end());
  auto valence = check_valences(aromatic.graph, failed);
  possible.insert(possible.end(), valence.begin(), valence.end());
  for (int i : aromatic.failed_atoms)
    possible.push_back({ErrorCode::kIncorrectAromaticity, Locus::atom(i),
                        atom_label(with_h, i) + ": " + aromatic.message});
  if (!possible.empty()) {
    r.stage = Stage::kPossibility;
    r.errors = std::move(possible);
    return r;
  }

  auto sanity = check_ring_strain(aromatic.graph);
  auto stereo = check_stereo_notation(aromatic.graph);
  sanity.insert(sanity.end(), stereo.begin(), stereo.end());
  if (!sanity.empty()) {
    r.stage = Stage::kSanity;
    r.errors = std::move(sanity);
  }
  return r;
}

stats::RateEstimate corpus_validity_rate(std::span<const ValidityReport> reports,
                                         double confidence) {
  if (reports.empty())
    throw stats::EmptyCorpus("corpus_validity_rate: no reports");
  const long ok = std::count_if(reports.begin(), reports.end(),
                                [](const ValidityReport &r) { return r.valid(); });
  return stats::wilson_from_counts(ok, static_cast<long>(reports.size()),
                                   confidence);
}

std::string to_jsonl(const ValidityReport &report) {
  nlohmann::ordered_json j;
  j["input"] = report.input;
  j["stage"] = to_string(report.stage);
  j["valid"] = report.valid();
  auto codes = nlohmann::ordered_json::array();
  auto loci = nlohmann::ordered_json::array();
  auto messages = nlohmann::ordered_json::array();
  for (const auto &e : report.errors) {
    codes.push_back(to_string(e.code));
    loci.push_back(e.locus.str());
    messages.push_back(e.message);
  }
  j["codes"] = std::move(codes);
  j["loci"] = std::move(loci);
  j["messages"] = std::move(messages);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace chemeval::validity
