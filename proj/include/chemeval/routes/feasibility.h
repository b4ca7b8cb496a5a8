//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_ROUTES_FEASIBILITY_H_
#define CHEMEVAL_ROUTES_FEASIBILITY_H_

#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "chemeval/routes/conditions.h"
#include "chemeval/routes/reaction.h"
#include "chemeval/routes/rules.h"
#include "chemeval/stats/proportions.h"

namespace chemeval::routes {

class RouteError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class RuleTableMissing : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CatalogMissing : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Step {
  int index = 0;
  Reaction reaction;
  std::string conditions_text;
};

struct Route {
  /// Canonical SMILES of the target.
  std::string target;
  std::vector<Step> steps;
  /// Canonical SMILES. Derived from the steps when not declared.
  std::vector<std::string> starting_materials;
  bool starting_materials_declared = false;
};

/// Line format:
///   TARGET: <SMILES>                      (optional)
///   STARTING MATERIALS: <SMILES>, ...     (optional)
///   STEP i: <reaction SMILES> | <conditions text>
/// Steps must be numbered 1..n. Every product set except the last must feed
/// a later step, and the target (when given) must be a last-step product.
/// Throws RouteError.
Route parse_route(std::string_view text);

/// Set of canonical SMILES.
class Catalog {
public:
  /// One SMILES per line; '#' comments and unparsable lines are skipped.
  static Catalog read(std::istream &in);
  static Catalog load(const std::string &path);

  void add(std::string_view smiles);
  bool contains(const std::string &canonical) const {
    return entries_.count(canonical) > 0;
  }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

private:
  std::unordered_set<std::string> entries_;
};

struct FeasibilityOptions {
  int max_steps = 12;
  ConditionBounds bounds;
};

struct StepAssessment {
  int index = 0;
  std::vector<std::string> templates;
  std::vector<std::string> incompatibilities;
  std::vector<std::string> condition_issues;
  MassBalance balance;
};

struct FeasibilityReport {
  bool reaction_validity = false;
  bool reagent_compatibility = false;
  bool condition_reasonableness = false;
  bool starting_material_availability = false;
  bool step_efficiency = false;
  bool feasible = false;
  // Expert-judgment components that are never guessed.
  bool stereochemical_control_assessed = false;
  bool protecting_groups_assessed = false;

  int step_count = 0;
  std::vector<std::string> missing_starting_materials;
  std::vector<StepAssessment> steps;

  /// Names of the failing components, in fixed order.
  std::vector<std::string> failures() const;
};

/// Throws RuleTableMissing / CatalogMissing on empty inputs.
FeasibilityReport assess_feasibility(const Route &route, const Catalog &catalog,
                                     const RuleTable &rules,
                                     const FeasibilityOptions &options = {});

/// Throws stats::EmptyCorpus.
stats::RateEstimate
corpus_feasibility_rate(std::span<const FeasibilityReport> reports,
                        double confidence = 0.95);

std::string to_jsonl(const FeasibilityReport &report);

}  // namespace chemeval::routes

#endif  // CHEMEVAL_ROUTES_FEASIBILITY_H_
