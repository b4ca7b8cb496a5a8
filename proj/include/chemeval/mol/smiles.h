//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_MOL_SMILES_H_
#define CHEMEVAL_MOL_SMILES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "chemeval/mol/molecule.h"

namespace chemeval::mol {

enum class SyntaxErrorKind : std::uint8_t {
  kEmptyInput,
  kInvalidSyntax,
  kMismatchedBrackets,
  kRingClosure,
  kUnknownElement,
  kMalformedIsotope,
  kDanglingBond,
  kUnsupportedFeature,
};

std::string_view to_string(SyntaxErrorKind kind);

class SyntaxError : public std::runtime_error {
public:
  SyntaxError(SyntaxErrorKind kind, std::size_t position, std::string message);

  SyntaxErrorKind kind() const { return kind_; }
  /// Zero-based character offset into the trimmed input.
  std::size_t position() const { return position_; }
  const std::string &detail() const { return detail_; }

private:
  SyntaxErrorKind kind_;
  std::size_t position_;
  std::string detail_;
};

struct ParseOptions {
  /// Accept ":n" atom classes (reaction SMILES).
  bool allow_atom_maps = false;
  /// Accept '*' and [#n] query atoms (substructure patterns).
  bool pattern = false;
};

/// Parses one SMILES string into a graph. Implicit hydrogens are not
/// assigned. Leading and trailing whitespace is ignored.
MoleculeGraph parse_smiles(std::string_view text, ParseOptions options = {});

struct WriteOptions {
  /// Write localized (Kekulé) bonds with uppercase atoms.
  bool kekule = false;
  /// Emit stereo marks (@, @@, /, \).
  bool stereo = true;
  /// Emit atom-map classes.
  bool atom_maps = true;
};

/// Writes a SMILES string visiting atoms in increasing `ranks` order: each
/// fragment starts at its lowest-ranked atom and branches are taken in rank
/// order. `ranks` must be a permutation of 0..n-1. The graph must have its
/// hydrogens assigned.
std::string write_smiles(const MoleculeGraph &g, std::span<const int> ranks,
                         const WriteOptions &options = {});

/// Canonical SMILES of an already prepared graph (see prepare()).
std::string write_canonical_smiles(const MoleculeGraph &g);

/// parse + assign hydrogens + aromaticity perception + canonical writing.
/// Throws SyntaxError or AromaticityError.
std::string canonical_smiles(std::string_view text);

/// Full preparation pipeline used everywhere a "chemically interpreted"
/// graph is needed: hydrogens, rings, kekulization, aromaticity.
MoleculeGraph prepare(const MoleculeGraph &parsed);

}  // namespace chemeval::mol

#endif  // CHEMEVAL_MOL_SMILES_H_
