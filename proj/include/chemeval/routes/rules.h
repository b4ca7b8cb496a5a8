//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_ROUTES_RULES_H_
#define CHEMEVAL_ROUTES_RULES_H_

#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemeval/mol/molecule.h"
#include "chemeval/routes/reaction.h"

namespace chemeval::routes {

class RuleTableError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct FunctionalGroup {
  std::string name;
  std::vector<std::string> sources;
  std::vector<mol::MoleculeGraph> patterns;
};

/// One side requirement: satisfied when some molecule on that side carries
/// any of `any_of`; a negated requirement is satisfied when none does.
struct Requirement {
  std::vector<std::string> any_of;
  bool negated = false;
};

struct Template {
  std::string id;
  std::vector<Requirement> reactants;
  std::vector<Requirement> products;
  /// Each entry is one group ("alcohol") or a pair ("amine+acyl_chloride")
  /// whose presence among the reactants makes the step incompatible.
  std::vector<std::vector<std::string>> incompatible;
};

struct RuleTable {
  std::map<std::string, FunctionalGroup> groups;
  std::vector<Template> templates;

  bool empty() const { return templates.empty(); }
};

/// Line-delimited records:
///   {"group": name, "patterns": [query SMILES, ...]}
///   {"template": id, "reactants": [req, ...], "products": [req, ...],
///    "incompatible": [entry, ...]}
/// where req is "a|b" (any of) or "!a" (none of). Blank lines and lines
/// starting with '#' are skipped. Throws RuleTableError.
RuleTable parse_rule_table(std::istream &in);
RuleTable load_rule_table(const std::string &path);
/// The table shipped with the library (also in data/rules.jsonl).
const RuleTable &builtin_rule_table();
const char *builtin_rule_table_text();

/// Names of the groups present in a prepared molecule.
std::set<std::string> groups_present(const RuleTable &table,
                                     const mol::MoleculeGraph &g);

struct TemplateMatch {
  std::vector<std::string> matched;
  /// Per matched template, incompatibility entries hit by the reactants.
  std::map<std::string, std::vector<std::string>> incompatibilities;
};

TemplateMatch match_templates(const RuleTable &table, const Reaction &r);

}  // namespace chemeval::routes

#endif  // CHEMEVAL_ROUTES_RULES_H_
