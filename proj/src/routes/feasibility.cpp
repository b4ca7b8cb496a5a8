//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/routes/feasibility.h"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chemeval/mol/perception.h"
#include "chemeval/mol/smiles.h"

namespace chemeval::routes {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string canonical_of(std::string_view smiles) {
  auto checked = mol::perceive_aromaticity_checked(
      mol::assign_implicit_hydrogens(mol::parse_smiles(smiles)));
  return mol::write_canonical_smiles(checked.graph);
}

std::vector<std::string> keys_of(const std::vector<mol::MoleculeGraph> &gs) {
  std::vector<std::string> out;
  for (const auto &g : gs)
    out.push_back(canonical_key(g));
  return out;
}

}  // namespace

Route parse_route(std::string_view text) {
  static const std::regex step_re(R"(^\s*STEP\s+(\d+)\s*:\s*(.*)$)",
                                  std::regex::icase);
  static const std::regex target_re(R"(^\s*TARGET\s*:\s*(.*)$)",
                                    std::regex::icase);
  static const std::regex sm_re(R"(^\s*STARTING\s+MATERIALS?\s*:\s*(.*)$)",
                                std::regex::icase);

  Route route;
  std::string target_text;
  std::size_t pos = 0;
  const std::string all(text);
  while (pos <= all.size()) {
    auto nl = all.find('\n', pos);
    if (nl == std::string::npos)
      nl = all.size();
    const std::string line = all.substr(pos, nl - pos);
    pos = nl + 1;
    std::smatch m;
    if (std::regex_match(line, m, step_re)) {
      Step step;
      step.index = std::stoi(m[1].str());
      const std::string body = m[2].str();
      const auto bar = body.find('|');
      const std::string rxn = trim(body.substr(0, bar));
      if (bar != std::string::npos)
        step.conditions_text = trim(body.substr(bar + 1));
      try {
        step.reaction = parse_reaction(rxn);
      } catch (const mol::SyntaxError &e) {
        throw RouteError("step " + std::to_string(step.index) + ": " +
                         e.what());
      }
      route.steps.push_back(std::move(step));
    } else if (std::regex_match(line, m, target_re)) {
      target_text = trim(m[1].str());
    } else if (std::regex_match(line, m, sm_re)) {
      route.starting_materials_declared = true;
      std::string list = m[1].str();
      std::replace(list.begin(), list.end(), ',', ' ');
      std::replace(list.begin(), list.end(), ';', ' ');
      std::istringstream in(list);
      std::string token;
      while (in >> token) {
        try {
          route.starting_materials.push_back(canonical_of(token));
        } catch (const mol::SyntaxError &e) {
          throw RouteError("starting material '" + token + "': " + e.what());
        }
      }
    }
  }

  if (route.steps.empty())
    throw RouteError("route has no STEP lines");
  for (std::size_t i = 0; i < route.steps.size(); ++i)
    if (route.steps[i].index != static_cast<int>(i) + 1)
      throw RouteError("steps must be numbered 1.." +
                       std::to_string(route.steps.size()) + " in order");

  std::vector<std::vector<std::string>> reactant_keys, product_keys;
  for (const auto &s : route.steps) {
    reactant_keys.push_back(keys_of(s.reaction.reactants));
    product_keys.push_back(keys_of(s.reaction.products));
  }

  if (!target_text.empty()) {
    try {
      route.target = canonical_of(target_text);
    } catch (const mol::SyntaxError &e) {
      throw RouteError(std::string("target: ") + e.what());
    }
    const auto &last = product_keys.back();
    if (std::find(last.begin(), last.end(), route.target) == last.end())
      throw RouteError("target is not a product of the last step");
  } else {
    route.target = product_keys.back().front();
  }

  const std::size_t n = route.steps.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    bool feeds = false;
    for (const auto &p : product_keys[i])
      for (std::size_t j = i + 1; j < n && !feeds; ++j)
        feeds = std::find(reactant_keys[j].begin(), reactant_keys[j].end(),
                          p) != reactant_keys[j].end();
    if (!feeds)
      throw RouteError("products of step " + std::to_string(i + 1) +
                       " are not used by any later step");
  }

  if (!route.starting_materials_declared) {
    std::set<std::string> produced, seen;
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto &r : reactant_keys[i])
        if (!produced.count(r) && seen.insert(r).second)
          route.starting_materials.push_back(r);
      produced.insert(product_keys[i].begin(), product_keys[i].end());
    }
  }
  return route;
}

Catalog Catalog::read(std::istream &in) {
  Catalog c;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#')
      continue;
    try {
      c.add(t);
    } catch (const std::exception &) {
      // Unparsable catalog entries can never match a canonical key.
    }
  }
  return c;
}

Catalog Catalog::load(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw CatalogMissing("cannot open catalog " + path);
  return read(in);
}

void Catalog::add(std::string_view smiles) {
  entries_.insert(canonical_of(smiles));
}

std::vector<std::string> FeasibilityReport::failures() const {
  std::vector<std::string> out;
  if (!reaction_validity)
    out.push_back("reaction_validity");
  if (!reagent_compatibility)
    out.push_back("reagent_compatibility");
  if (!condition_reasonableness)
    out.push_back("condition_reasonableness");
  if (!starting_material_availability)
    out.push_back("starting_material_availability");
  if (!step_efficiency)
    out.push_back("step_efficiency");
  return out;
}

FeasibilityReport assess_feasibility(const Route &route, const Catalog &catalog,
                                     const RuleTable &rules,
                                     const FeasibilityOptions &options) {
  if (rules.empty())
    throw RuleTableMissing("no transformation templates loaded");
  if (catalog.empty())
    throw CatalogMissing("starting-material catalog is empty");

  FeasibilityReport r;
  r.reaction_validity = true;
  r.reagent_compatibility = true;
  r.condition_reasonableness = true;
  r.step_count = static_cast<int>(route.steps.size());

  for (const auto &step : route.steps) {
    StepAssessment a;
    a.index = step.index;
    const auto match = match_templates(rules, step.reaction);
    a.templates = match.matched;
    bool clean = match.matched.empty();
    for (const auto &id : match.matched) {
      auto it = match.incompatibilities.find(id);
      if (it == match.incompatibilities.end()) {
        clean = true;
        continue;
      }
      for (const auto &hit : it->second)
        a.incompatibilities.push_back(id + ": " + hit);
    }
    if (clean)
      a.incompatibilities.clear();
    a.condition_issues =
        condition_issues(parse_conditions(step.conditions_text), options.bounds);
    a.balance = check_mass_balance(step.reaction);

    r.reaction_validity = r.reaction_validity && !a.templates.empty();
    r.reagent_compatibility = r.reagent_compatibility && clean;
    r.condition_reasonableness =
        r.condition_reasonableness && a.condition_issues.empty();
    r.steps.push_back(std::move(a));
  }

  for (const auto &sm : route.starting_materials)
    if (!catalog.contains(sm))
      r.missing_starting_materials.push_back(sm);
  r.starting_material_availability = r.missing_starting_materials.empty();
  r.step_efficiency = r.step_count <= options.max_steps;
  r.feasible = r.reaction_validity && r.reagent_compatibility &&
               r.condition_reasonableness && r.starting_material_availability &&
               r.step_efficiency;
  return r;
}

stats::RateEstimate
corpus_feasibility_rate(std::span<const FeasibilityReport> reports,
                        double confidence) {
  if (reports.empty())
    throw stats::EmptyCorpus("corpus_feasibility_rate: no reports");
  const long ok =
      std::count_if(reports.begin(), reports.end(),
                    [](const FeasibilityReport &r) { return r.feasible; });
  return stats::wilson_from_counts(ok, static_cast<long>(reports.size()),
                                   confidence);
}

std::string to_jsonl(const FeasibilityReport &report) {
  nlohmann::ordered_json j;
  j["feasible"] = report.feasible;
  j["reaction_validity"] = report.reaction_validity;
  j["reagent_compatibility"] = report.reagent_compatibility;
  j["condition_reasonableness"] = report.condition_reasonableness;
  j["starting_material_availability"] = report.starting_material_availability;
  j["step_efficiency"] = report.step_efficiency;
  j["stereochemical_control"] = "not assessed";
  j["protecting_groups"] = "not assessed";
  j["step_count"] = report.step_count;
  j["failures"] = report.failures();
  j["missing_starting_materials"] = report.missing_starting_materials;
  auto steps = nlohmann::ordered_json::array();
  for (const auto &s : report.steps) {
    nlohmann::ordered_json js;
    js["step"] = s.index;
    js["templates"] = s.templates;
    js["incompatibilities"] = s.incompatibilities;
    js["condition_issues"] = s.condition_issues;
    js["mass_balanced"] = s.balance.balanced;
    js["deficit"] = s.balance.deficit;
    steps.push_back(std::move(js));
  }
  j["steps"] = std::move(steps);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace chemeval::routes
