//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_CURATION_STANDARDIZE_H_
#define CHEMEVAL_CURATION_STANDARDIZE_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include "chemeval/mol/molecule.h"

namespace chemeval::curation {

class StandardizationConflict : public std::runtime_error {
public:
  StandardizationConflict(int atom, std::string message)
      : std::runtime_error(std::move(message)), atom_(atom) { }

  int atom() const { return atom_; }

private:
  int atom_;
};

/// Runs, each to a fixpoint: group normalization (charge-separated nitro and
/// azide, neutral sulfoxide/sulfone), neutralization of simple protonation
/// sites (O-/S- anions, protonated nitrogen), then the tautomer rules
/// enol -> ketone and 2-hydroxypyridine -> 2-pyridone.
///
/// Input must be a prepared graph (hydrogens assigned, aromaticity
/// perceived); so is the output.
mol::MoleculeGraph standardize(const mol::MoleculeGraph &g);

/// Parse, standardize and write canonical SMILES.
std::string standardize_smiles(std::string_view smiles);

}  // namespace chemeval::curation

#endif  // CHEMEVAL_CURATION_STANDARDIZE_H_
