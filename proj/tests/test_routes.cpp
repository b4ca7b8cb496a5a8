//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chemeval/mol/smiles.h"
#include "chemeval/routes/conditions.h"
#include "chemeval/routes/feasibility.h"
#include "chemeval/routes/reaction.h"
#include "chemeval/routes/rules.h"

using namespace chemeval::routes;

namespace {

bool has(const std::vector<std::string> &v, const std::string &x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

Catalog catalog_of(std::initializer_list<const char *> smiles) {
  Catalog c;
  for (const char *s : smiles)
    c.add(s);
  return c;
}

std::string hydrolysis_route(const char *starting) {
  return std::string("TARGET: CC(=O)O\n") + "STARTING MATERIALS: " + starting +
         "\nSTEP 1: CCOC(=O)C.O>>CC(=O)O.CCO | NaOH, water, 80 °C\n";
}

}  // namespace

TEST_CASE("reaction parsing") {
  auto r = parse_reaction("CC=O.[H][H]>>CCO");
  CHECK(r.reactants.size() == 2);
  CHECK(r.agents.empty());
  CHECK(r.products.size() == 1);

  auto id = parse_reaction("C>>C");
  CHECK(id.reactants.size() == 1);
  CHECK(id.products.size() == 1);

  auto with_agents = parse_reaction("CCO.CC(=O)O>OS(=O)(=O)O>CCOC(C)=O.O");
  CHECK(with_agents.agents.size() == 1);
  CHECK(with_agents.products.size() == 2);

  CHECK_THROWS_AS(parse_reaction("CC>O"), chemeval::mol::SyntaxError);
  CHECK_THROWS_AS(parse_reaction("C>C>C>C"), chemeval::mol::SyntaxError);
  CHECK_THROWS_AS(parse_reaction("CC>>"), chemeval::mol::SyntaxError);
  try {
    parse_reaction("CC.C(C>>C");
    FAIL("expected error");
  } catch (const ReactionSyntaxError &e) {
    CHECK(e.role() == Role::kReactant);
    CHECK(e.component() == 1);
  }
  try {
    parse_reaction("CC>>C1C");
    FAIL("expected error");
  } catch (const ReactionSyntaxError &e) {
    CHECK(e.role() == Role::kProduct);
    CHECK(e.component() == 0);
  }
}

TEST_CASE("mass balance") {
  CHECK(check_mass_balance(parse_reaction("CC=O.[H][H]>>CCO")).balanced);
  auto ox = check_mass_balance(parse_reaction("CCO>>CC(=O)O"));
  CHECK_FALSE(ox.balanced);
  REQUIRE(ox.deficit.size() == 1);
  CHECK(ox.deficit.at("O") == 1);
  CHECK(check_mass_balance(parse_reaction("C>>C")).balanced);
  CHECK(check_mass_balance(parse_reaction("CC(=O)Cl.NC>>CC(=O)NC")).balanced);
  auto two = check_mass_balance(parse_reaction("C>>ClCCl"));
  CHECK(two.deficit.at("Cl") == 2);
  CHECK(two.deficit.count("C") == 0);
  CHECK(check_mass_balance(parse_reaction("CCO>[O-][Cr](=O)(=O)[O-]>CC=O")).balanced);
}

TEST_CASE("mass balance is reflexive and monotone in the reactants") {
  const char *mols[] = {"CCO", "c1ccccc1", "CC(=O)O", "N#N", "ClCCl", "O", "CS(=O)C",
                        "CCN(CC)CC", "Brc1ccccc1"};
  for (const char *a : mols) {
    CHECK(check_mass_balance(parse_reaction(std::string(a) + ">>" + a)).balanced);
    for (const char *b : mols) {
      const std::string base = std::string(a) + ">>" + b;
      const bool before = check_mass_balance(parse_reaction(base)).balanced;
      for (const char *extra : mols) {
        const std::string more = std::string(a) + "." + extra + ">>" + b;
        const bool after = check_mass_balance(parse_reaction(more)).balanced;
        CHECK_FALSE((before && !after));
      }
    }
  }
}

TEST_CASE("conditions") {
  auto c = parse_conditions("NaOH, water, 80 °C, 2 h");
  REQUIRE(c.temperatures_c.size() == 1);
  CHECK(c.temperatures_c[0] == doctest::Approx(80));
  CHECK(condition_issues(c).empty());

  auto cold = parse_conditions("n-BuLi, THF, -78 °C");
  REQUIRE(cold.temperatures_c.size() == 1);
  CHECK(cold.temperatures_c[0] == doctest::Approx(-78));
  CHECK(condition_issues(cold).empty());

  auto kelvin = parse_conditions("298 K");
  REQUIRE(kelvin.temperatures_c.size() == 1);
  CHECK(kelvin.temperatures_c[0] == doctest::Approx(24.85));

  CHECK(condition_issues(parse_conditions("pyrolysis at 650 °C")).size() == 1);
  CHECK(condition_issues(parse_conditions("H2, 150 atm")).size() == 1);
  auto bar = parse_conditions("H2 (2 bar), Pd/C");
  REQUIRE(bar.pressures_atm.size() == 1);
  CHECK(bar.pressures_atm[0] == doctest::Approx(2 / 1.01325));
  CHECK(condition_issues(parse_conditions("")).empty());
  CHECK(condition_issues(parse_conditions("room temperature")).empty());
}

TEST_CASE("builtin rule table") {
  const auto &rules = builtin_rule_table();
  CHECK(rules.templates.size() >= 20);
  CHECK(groups_present(rules, chemeval::mol::prepare(chemeval::mol::parse_smiles("CCOC(C)=O")))
            .count("ester"));
  auto m = match_templates(rules, parse_reaction("CCOC(=O)C.O>>CC(=O)O.CCO"));
  CHECK(has(m.matched, "ester_hydrolysis"));
  CHECK(match_templates(rules, parse_reaction("C>>CC")).matched.empty());
  auto suzuki = match_templates(rules, parse_reaction("Brc1ccccc1.OB(O)c1ccccc1>>c1ccc(-c2ccccc2)cc1"));
  CHECK(has(suzuki.matched, "suzuki_coupling"));
}

TEST_CASE("rule table parsing") {
  std::istringstream ok(
      "# comment\n"
      "{\"group\": \"ester\", \"patterns\": [\"[#6]C(=O)O[#6]\"]}\n"
      "{\"group\": \"acid\", \"patterns\": [\"C(=O)[OH]\"]}\n"
      "{\"template\": \"hydrolysis\", \"reactants\": [\"ester\"], \"products\": [\"acid\"], \"incompatible\": []}\n");
  auto t = parse_rule_table(ok);
  CHECK(t.templates.size() == 1);
  CHECK(t.groups.size() == 2);
  std::istringstream undefined("{\"template\": \"x\", \"reactants\": [\"nope\"], \"products\": [], \"incompatible\": []}\n");
  CHECK_THROWS_AS(parse_rule_table(undefined), RuleTableError);
  std::istringstream broken("{not json\n");
  CHECK_THROWS_AS(parse_rule_table(broken), RuleTableError);
}

TEST_CASE("route parsing and wiring") {
  auto route = parse_route(hydrolysis_route("CCOC(C)=O, O"));
  CHECK(route.steps.size() == 1);
  CHECK(route.target == chemeval::mol::canonical_smiles("CC(=O)O"));
  CHECK(route.starting_materials.size() == 2);
  CHECK(route.steps[0].conditions_text == "NaOH, water, 80 °C");

  auto derived = parse_route("STEP 1: CCOC(=O)C.O>>CC(=O)O.CCO\n");
  CHECK_FALSE(derived.starting_materials_declared);
  CHECK(derived.starting_materials.size() == 2);

  CHECK_THROWS_AS(parse_route("TARGET: CCO\n"), RouteError);
  CHECK_THROWS_AS(parse_route("STEP 2: C>>C\n"), RouteError);
  CHECK_THROWS_AS(parse_route("TARGET: CCN\nSTEP 1: CCO>>CC=O\n"), RouteError);
  CHECK_THROWS_AS(parse_route("STEP 1: CCO>>CC=O\nSTEP 2: CCN>>CC#N\n"), RouteError);
  CHECK_THROWS_AS(parse_route("STEP 1: CC(C>>C\n"), RouteError);
}

TEST_CASE("feasibility examples") {
  const auto &rules = builtin_rule_table();
  auto catalog = catalog_of({"CCOC(C)=O", "O", "CCO"});
  auto ok = assess_feasibility(parse_route(hydrolysis_route("CCOC(C)=O, O")), catalog, rules);
  CHECK(ok.feasible);
  CHECK(ok.failures().empty());

  auto missing = assess_feasibility(parse_route(hydrolysis_route("CCOC(C)=O, O, c1ccccc1")),
                                    catalog, rules);
  CHECK_FALSE(missing.starting_material_availability);
  CHECK_FALSE(missing.feasible);
  CHECK(missing.missing_starting_materials.size() == 1);

  std::string long_route = "STARTING MATERIALS: CCOC(C)=O, O, CCO\n";
  for (int i = 1; i <= 15; ++i) {
    long_route += "STEP " + std::to_string(i) + ": ";
    long_route += i % 2 ? "CCOC(=O)C.O>>CC(=O)O.CCO\n" : "CC(=O)O.CCO>>CCOC(=O)C.O\n";
  }
  auto too_long = assess_feasibility(parse_route(long_route), catalog, rules);
  CHECK_FALSE(too_long.step_efficiency);
  CHECK(too_long.reaction_validity);
  CHECK_FALSE(too_long.feasible);
  CHECK(too_long.step_count == 15);
  FeasibilityOptions relaxed;
  relaxed.max_steps = 20;
  CHECK(assess_feasibility(parse_route(long_route), catalog, rules, relaxed).feasible);
}

TEST_CASE("several failures on one route are all recorded") {
  const auto &rules = builtin_rule_table();
  auto catalog = catalog_of({"CCO"});
  auto r = assess_feasibility(
      parse_route("STARTING MATERIALS: C\nSTEP 1: C>>CC | 900 °C\n"), catalog, rules);
  CHECK_FALSE(r.feasible);
  auto f = r.failures();
  CHECK(has(f, "reaction_validity"));
  CHECK(has(f, "condition_reasonableness"));
  CHECK(has(f, "starting_material_availability"));
  CHECK_FALSE(has(f, "step_efficiency"));
  CHECK_FALSE(r.stereochemical_control_assessed);
  CHECK_FALSE(r.protecting_groups_assessed);
}

TEST_CASE("reagent incompatibility") {
  const auto &rules = builtin_rule_table();
  auto catalog = catalog_of({"CCO", "CCS"});
  auto r = assess_feasibility(
      parse_route("STARTING MATERIALS: CCO, CCS\nSTEP 1: CCO.CCS>>CC=O | PCC, DCM\n"),
      catalog, rules);
  CHECK_FALSE(r.reagent_compatibility);
  CHECK(r.reaction_validity);
  REQUIRE(r.steps.size() == 1);
  CHECK(r.steps[0].incompatibilities.size() == 1);
  auto clean = assess_feasibility(
      parse_route("STARTING MATERIALS: CCO\nSTEP 1: CCO>>CC=O | PCC, DCM\n"), catalog, rules);
  CHECK(clean.reagent_compatibility);
  CHECK(clean.feasible);
}

TEST_CASE("conjunction law") {
  const auto &rules = builtin_rule_table();
  auto catalog = catalog_of({"CCOC(C)=O", "O"});
  const char *routes[] = {
      "STEP 1: CCOC(=O)C.O>>CC(=O)O.CCO\n",
      "STEP 1: CCOC(=O)C.O>>CC(=O)O.CCO | 400 °C\n",
      "STEP 1: C>>CC\n",
      "STARTING MATERIALS: CCCC\nSTEP 1: CCOC(=O)C.O>>CC(=O)O.CCO\n",
  };
  for (const char *text : routes) {
    auto r = assess_feasibility(parse_route(text), catalog, rules);
    CHECK(r.feasible == (r.reaction_validity && r.reagent_compatibility &&
                         r.condition_reasonableness && r.starting_material_availability &&
                         r.step_efficiency));
    CHECK(r.feasible == r.failures().empty());
  }
}

TEST_CASE("missing inputs") {
  RuleTable empty_rules;
  auto route = parse_route(hydrolysis_route("O"));
  CHECK_THROWS_AS(assess_feasibility(route, catalog_of({"O"}), empty_rules), RuleTableMissing);
  CHECK_THROWS_AS(assess_feasibility(route, Catalog{}, builtin_rule_table()), CatalogMissing);
  CHECK_THROWS_AS(Catalog::load("/nonexistent/catalog.smi"), CatalogMissing);
}

TEST_CASE("catalog reading") {
  std::istringstream in("# header\nOCC\n\nnot(valid\nc1ccccc1\n");
  auto c = Catalog::read(in);
  CHECK(c.size() == 2);
  CHECK(c.contains(chemeval::mol::canonical_smiles("CCO")));
  CHECK(c.contains(chemeval::mol::canonical_smiles("C1=CC=CC=C1")));
}

TEST_CASE("feasibility rate") {
  const auto &rules = builtin_rule_table();
  auto catalog = catalog_of({"CCOC(C)=O", "O"});
  auto yes = assess_feasibility(parse_route(hydrolysis_route("CCOC(C)=O, O")), catalog, rules);
  auto no = assess_feasibility(parse_route("STEP 1: C>>CC\n"), catalog_of({"C"}), rules);
  std::vector<FeasibilityReport> two{yes, no};
  CHECK(corpus_feasibility_rate(two).point == 0.5);
  std::vector<FeasibilityReport> none_ok(7, no);
  CHECK(corpus_feasibility_rate(none_ok).ci_low == 0.0);
  std::vector<FeasibilityReport> many(372, yes);
  many.insert(many.end(), 128, no);
  CHECK(corpus_feasibility_rate(many).point == doctest::Approx(0.744));
  std::vector<FeasibilityReport> empty;
  CHECK_THROWS_AS(corpus_feasibility_rate(empty), chemeval::stats::EmptyCorpus);
  CHECK(to_jsonl(yes).find("\"feasible\":true") != std::string::npos);
}
