//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chemeval/cli/evaluate.h"
#include "chemeval/routes/feasibility.h"

using namespace chemeval::cli;
using chemeval::curation::TaskCategory;
namespace fs = std::filesystem;

namespace {

DocumentResult verdict(const std::string &model, int task, bool adherent) {
  DocumentResult r;
  r.meta.model = model;
  r.meta.task_id = "t" + std::to_string(task);
  r.meta.file = model + "_" + r.meta.task_id + ".md";
  r.adherent = adherent;
  return r;
}

const char *kGoodDoc =
    "<think>\n1. Hydrolyse the ester.\n</think>\n\n"
    "## Route\n\n```route\nTARGET: CC(=O)O\nSTARTING MATERIALS: CC(=O)OC, O\n"
    "STEP 1: CC(=O)OC.O>>CC(=O)O.CO | NaOH, water, 80 C\n```\n\n"
    "```smiles\nCC(=O)O\nCC(=O)OC\n```\n\n## Summary\n\nOne step.\n";

const char *kBadDoc =
    "## Answer\n\n```smiles\nC(C\nC1CC\nCCO\n```\n\nNo summary here.\n";

}  // namespace

TEST_CASE("discordant pairs reach the report unchanged") {
  std::vector<DocumentResult> results;
  for (int task = 1; task <= 10; ++task) {
    results.push_back(verdict("A", task, task <= 8));
    results.push_back(verdict("B", task, task <= 6));
  }
  auto report = aggregate(results);
  const auto &cs = report.comparisons[static_cast<std::size_t>(Metric::kFormatAdherence)];
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].model_a == "A");
  CHECK(cs[0].model_b == "B");
  CHECK(cs[0].paired_tasks == 10);
  CHECK(cs[0].only_a == 2);
  CHECK(cs[0].only_b == 0);
  CHECK(report.rate("A", kOverall, Metric::kFormatAdherence).successes == 8);
  CHECK(report.rate("B", kOverall, Metric::kFormatAdherence).successes == 6);

  bool found = false;
  for (const auto &line : report_jsonl(report))
    found = found || (line.find("\"only_a\":2") != std::string::npos &&
                      line.find("\"only_b\":0") != std::string::npos);
  CHECK(found);
  CHECK(comparison_jsonl(cs[0], "format_adherence").find("\"only_a\":2") != std::string::npos);
}

TEST_CASE("a single model has no comparisons") {
  std::vector<DocumentResult> results;
  for (int task = 1; task <= 5; ++task)
    results.push_back(verdict("solo", task, task % 2 == 0));
  auto report = aggregate(results);
  for (const auto &cs : report.comparisons)
    CHECK(cs.empty());
  CHECK(render_report(report).find("comparisons:") == std::string::npos);
}

TEST_CASE("adherence row at corpus scale") {
  std::vector<DocumentResult> results;
  for (int task = 0; task < 500; ++task)
    results.push_back(verdict("m", task, task < 481));
  auto report = aggregate(results);
  auto rate = report.rate("m", kOverall, Metric::kFormatAdherence);
  CHECK(rate.trials == 500);
  CHECK(rate.half_width() == doctest::Approx(0.0169).epsilon(0.03));
  CHECK(render_report(report).find("96.2% (\xC2\xB1" "1.7%)") != std::string::npos);
}

TEST_CASE("document evaluation") {
  std::istringstream catalog_text("CC(=O)OC\nO\n");
  const auto catalog = chemeval::routes::Catalog::read(catalog_text);
  EvaluationContext ctx;
  ctx.catalog = &catalog;

  DocumentMeta meta{"good.md", "A", "t1", TaskCategory::kRetrosynthesis, std::nullopt};
  auto good = evaluate_document(meta, kGoodDoc, ctx);
  CHECK(good.adherent);
  CHECK(good.smiles_total == 2);
  CHECK(good.smiles_valid == 2);
  REQUIRE(good.feasible.has_value());
  CHECK(*good.feasible);
  CHECK(good.all_valid() == std::optional<bool>(true));

  meta.file = "bad.md";
  auto bad = evaluate_document(meta, kBadDoc, ctx);
  CHECK_FALSE(bad.adherent);
  CHECK(bad.smiles_total == 3);
  CHECK(bad.smiles_valid == 1);
  CHECK(bad.error_codes.size() == 2);
  REQUIRE(bad.feasible.has_value());
  CHECK_FALSE(*bad.feasible);

  meta.category = TaskCategory::kPropertyPrediction;
  CHECK_FALSE(evaluate_document(meta, kBadDoc, ctx).feasible.has_value());

  EvaluationContext no_catalog;
  CHECK_THROWS_AS(evaluate_document(meta, kGoodDoc, no_catalog),
                  chemeval::routes::CatalogMissing);
}

TEST_CASE("validity counts structures and taxonomy counts codes") {
  std::istringstream catalog_text("O\n");
  const auto catalog = chemeval::routes::Catalog::read(catalog_text);
  EvaluationContext ctx;
  ctx.catalog = &catalog;
  DocumentMeta meta{"bad.md", "A", "t1", TaskCategory::kPropertyPrediction, std::nullopt};
  std::vector<DocumentResult> results{evaluate_document(meta, kBadDoc, ctx)};
  meta.task_id = "t2";
  results.push_back(evaluate_document(meta, "```smiles\nCCO\n```\n", ctx));
  auto report = aggregate(results);
  auto rate = report.rate("A", kOverall, Metric::kChemicalValidity);
  CHECK(rate.successes == 2);
  CHECK(rate.trials == 4);
  CHECK(report.taxonomy.at("A").at("mismatched_brackets") == 1);
  CHECK(report.taxonomy.at("A").at("ring_closure_error") == 1);
  CHECK(report.rate("A", "property_prediction", Metric::kSynthesisFeasibility).trials == 0);
}

TEST_CASE("manifest reading") {
  const auto dir = fs::temp_directory_path() / "chemeval_manifest";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream(dir / "manifest.jsonl")
        << R"({"file":"a.md","model":"A","task_id":"1","task_category":"retrosynthesis","difficulty":"hard"})"
        << "\n\n"
        << R"({"file":"b.md","model":"B","task_id":"1","task_category":"property_prediction"})"
        << "\n";
  }
  auto metas = read_manifest(dir);
  REQUIRE(metas.size() == 2);
  CHECK(metas[0].category == TaskCategory::kRetrosynthesis);
  CHECK(metas[0].difficulty == std::optional<std::string>("hard"));
  CHECK_FALSE(metas[1].difficulty.has_value());

  std::ofstream(dir / "manifest.jsonl") << R"({"file":"a.md","model":"A"})" << "\n";
  CHECK_THROWS_AS(read_manifest(dir), MetadataMissing);
  std::ofstream(dir / "manifest.jsonl")
      << R"({"file":"a.md","model":"A","task_id":"1","task_category":"baking"})" << "\n";
  CHECK_THROWS_AS(read_manifest(dir), MetadataMissing);
  fs::remove_all(dir);
  CHECK_THROWS_AS(read_manifest(dir), MetadataMissing);
}

TEST_CASE("route extraction") {
  using chemeval::protocol::parse_document;
  CHECK(extract_route(parse_document(kGoodDoc)).has_value());
  CHECK_FALSE(extract_route(parse_document(kBadDoc)).has_value());
  auto prose = extract_route(parse_document("TARGET: CCO\nSTEP 1: CC=O>>CCO | NaBH4\n"));
  REQUIRE(prose.has_value());
  CHECK(prose->find("STEP 1") != std::string::npos);
}
