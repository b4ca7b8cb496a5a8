//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/routes/reaction.h"


#include "chemeval/mol/element.h"
#include "chemeval/mol/perception.h"

namespace chemeval::routes {

std::string_view to_string(Role role) {
  switch (role) {
  case Role::kReactant: return "reactant";
  case Role::kAgent: return "agent";
  case Role::kProduct: return "product";
  }
  return "";
}

ReactionSyntaxError::ReactionSyntaxError(const mol::SyntaxError &inner,
                                         Role role, int component,
                                         std::size_t offset)
    : mol::SyntaxError(inner.kind(), inner.position() + offset,
                       std::string(to_string(role)) + " " +
                           std::to_string(component) + ": " + inner.detail()),
      role_(role), component_(component) { }

ReactionSyntaxError::ReactionSyntaxError(mol::SyntaxErrorKind kind,
                                         std::size_t position,
                                         std::string message)
    : mol::SyntaxError(kind, position, std::move(message)) { }

namespace {

mol::MoleculeGraph interpret(const mol::MoleculeGraph &parsed) {
  auto checked =
      mol::perceive_aromaticity_checked(mol::assign_implicit_hydrogens(parsed));
  return std::move(checked.graph);
}

std::vector<mol::MoleculeGraph> parse_field(std::string_view text,
                                            std::size_t offset, Role role) {
  std::vector<mol::MoleculeGraph> out;
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string_view::npos)
    return out;
  mol::ParseOptions options;
  options.allow_atom_maps = true;
  std::size_t start = 0;
  int index = 0;
  while (start <= text.size()) {
    std::size_t dot = text.find('.', start);
    if (dot == std::string_view::npos)
      dot = text.size();
    const auto piece = text.substr(start, dot - start);
    try {
      out.push_back(interpret(mol::parse_smiles(piece, options)));
    } catch (const mol::SyntaxError &e) {
      // Leading whitespace is trimmed by the molecule parser.
      const auto lead = piece.find_first_not_of(" \t");
      throw ReactionSyntaxError(
          e, role, index,
          offset + start + (lead == std::string_view::npos ? 0 : lead));
    }
    ++index;
    start = dot + 1;
  }
  return out;
}

}  // namespace

Reaction parse_reaction(std::string_view text) {
  const auto gt1 = text.find('>');
  const auto gt2 =
      gt1 == std::string_view::npos ? gt1 : text.find('>', gt1 + 1);
  if (gt1 == std::string_view::npos || gt2 == std::string_view::npos)
    throw ReactionSyntaxError(
        mol::SyntaxErrorKind::kInvalidSyntax,
        gt1 == std::string_view::npos ? text.size() : gt1,
        "reaction SMILES needs exactly two '>' separators");
  if (const auto gt3 = text.find('>', gt2 + 1); gt3 != std::string_view::npos)
    throw ReactionSyntaxError(mol::SyntaxErrorKind::kInvalidSyntax, gt3,
                              "reaction SMILES has more than two '>'");

  Reaction r;
  r.text = std::string(text);
  r.reactants = parse_field(text.substr(0, gt1), 0, Role::kReactant);
  r.agents = parse_field(text.substr(gt1 + 1, gt2 - gt1 - 1), gt1 + 1,
                         Role::kAgent);
  r.products = parse_field(text.substr(gt2 + 1), gt2 + 1, Role::kProduct);
  if (r.products.empty())
    throw ReactionSyntaxError(mol::SyntaxErrorKind::kEmptyInput, text.size(),
                              "reaction has no products");
  return r;
}

std::string canonical_key(const mol::MoleculeGraph &g) {
  mol::MoleculeGraph copy = g;
  for (int i = 0; i < static_cast<int>(copy.num_atoms()); ++i)
    copy.mutable_atom(i).atom_map = 0;
  return mol::write_canonical_smiles(copy);
}

MassBalance check_mass_balance(const Reaction &r) {
  std::vector<int> left(mol::kMaxAtomicNumber + 1, 0);
  std::vector<int> right(mol::kMaxAtomicNumber + 1, 0);
  auto add = [](std::vector<int> &acc, const mol::MoleculeGraph &g) {
    const auto comp = mol::heavy_atom_composition(g);
    for (std::size_t z = 0; z < comp.size() && z < acc.size(); ++z)
      acc[z] += comp[z];
  };
  for (const auto &g : r.reactants)
    add(left, g);
  for (const auto &g : r.agents)
    add(left, g);
  for (const auto &g : r.products)
    add(right, g);

  MassBalance out;
  for (int z = 1; z <= mol::kMaxAtomicNumber; ++z) {
    if (right[z] > left[z]) {
      out.balanced = false;
      out.deficit[std::string(mol::element_symbol(z))] = right[z] - left[z];
    }
  }
  return out;
}

}  // namespace chemeval::routes
