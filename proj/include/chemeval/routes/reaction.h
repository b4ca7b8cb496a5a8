//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_ROUTES_REACTION_H_
#define CHEMEVAL_ROUTES_REACTION_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "chemeval/mol/molecule.h"
#include "chemeval/mol/smiles.h"

namespace chemeval::routes {

enum class Role { kReactant, kAgent, kProduct };

std::string_view to_string(Role role);

/// Syntax error inside one component of a reaction SMILES. position() is an
/// offset into the whole reaction text.
class ReactionSyntaxError : public mol::SyntaxError {
public:
  ReactionSyntaxError(const mol::SyntaxError &inner, Role role, int component,
                      std::size_t offset);
  ReactionSyntaxError(mol::SyntaxErrorKind kind, std::size_t position,
                      std::string message);

  Role role() const { return role_; }
  /// Index within its role, or -1 for separator errors.
  int component() const { return component_; }

private:
  Role role_ = Role::kReactant;
  int component_ = -1;
};

struct Reaction {
  std::string text;
  std::vector<mol::MoleculeGraph> reactants;
  std::vector<mol::MoleculeGraph> agents;
  std::vector<mol::MoleculeGraph> products;
};

/// "reactants>agents>products", components separated by '.'. Atom-map classes
/// are accepted. Components are hydrogen-assigned and aromaticity-perceived
/// where possible.
Reaction parse_reaction(std::string_view text);

/// Canonical SMILES with atom maps removed.
std::string canonical_key(const mol::MoleculeGraph &g);

struct MassBalance {
  bool balanced = true;
  /// Element symbol -> atoms missing on the left-hand side.
  std::map<std::string, int> deficit;
};

/// Heavy-atom check: products must be a sub-multiset of reactants and agents.
MassBalance check_mass_balance(const Reaction &r);

}  // namespace chemeval::routes

#endif  // CHEMEVAL_ROUTES_REACTION_H_
