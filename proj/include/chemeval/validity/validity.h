//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_VALIDITY_VALIDITY_H_
#define CHEMEVAL_VALIDITY_VALIDITY_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chemeval/mol/molecule.h"
#include "chemeval/stats/proportions.h"

namespace chemeval::validity {

enum class Stage { kSyntax, kPossibility, kSanity, kValid };

enum class ErrorCode {
  kInvalidSyntax,
  kMismatchedBrackets,
  kRingClosureError,
  kInvalidIsotope,
  kIncorrectValence,
  kIncorrectAromaticity,
  kInvalidStereochemistry,
  kStrainViolation,
};

std::string_view to_string(Stage stage);
std::string_view to_string(ErrorCode code);

struct Locus {
  enum class Kind { kNone, kPosition, kAtom, kBond };
  Kind kind = Kind::kNone;
  int index = -1;

  static Locus position(int i) { return {Kind::kPosition, i}; }
  static Locus atom(int i) { return {Kind::kAtom, i}; }
  static Locus bond(int i) { return {Kind::kBond, i}; }
  /// "pos:3", "atom:0", "bond:2" or "".
  std::string str() const;
};

struct ValidityError {
  ErrorCode code;
  Locus locus;
  std::string message;
};

struct ValidityReport {
  std::string input;
  Stage stage = Stage::kValid;
  std::vector<ValidityError> errors;

  bool valid() const { return stage == Stage::kValid; }
  bool has(ErrorCode code) const;
};

/// Three-stage check: syntax, chemical possibility (valence, aromaticity,
/// isotope range) and notation-level sanity (ring strain, stereo marks).
/// Stops at the first failing stage and reports every error found there.
ValidityReport validate(std::string_view text);

/// Stereo-notation problems of an H-assigned graph with rings perceived.
std::vector<ValidityError> check_stereo_notation(const mol::MoleculeGraph &g);

/// Triple bonds and trans double bonds inside rings of fewer than 8 atoms.
std::vector<ValidityError> check_ring_strain(const mol::MoleculeGraph &g);

/// Fraction of valid reports with a Wilson interval. Throws
/// stats::EmptyCorpus on an empty list.
stats::RateEstimate corpus_validity_rate(std::span<const ValidityReport> reports,
                                         double confidence = 0.95);

/// One JSON object (single line) with fields input, stage, valid, codes,
/// loci, messages.
std::string to_jsonl(const ValidityReport &report);

}  // namespace chemeval::validity

#endif  // CHEMEVAL_VALIDITY_VALIDITY_H_
