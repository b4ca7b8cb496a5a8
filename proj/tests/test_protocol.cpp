//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chemeval/protocol/document.h"
#include "chemeval/protocol/format_check.h"
#include "chemeval/protocol/reasoning.h"

using namespace chemeval::protocol;

namespace {

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

const char *kCompliant =
    "<think>\n1. Ethanol is the target.\n</think>\n\n"
    "## Answer\n\nUse ethanol.\n\n```smiles\nCCO\n```\n\n## Summary\n\nDone.\n";

FormatReport check(const std::string &text) { return check_format(parse_document(text)); }

struct Labelled {
  std::string file;
  std::optional<Requirement> violates;
};

std::vector<Labelled> golden() {
  std::ifstream in(CHEMEVAL_FIXTURES "/protocol/labels.jsonl");
  std::vector<Labelled> out;
  for (std::string line; std::getline(in, line);) {
    if (line.empty())
      continue;
    auto j = nlohmann::json::parse(line);
    Labelled l{j.at("file").get<std::string>(), std::nullopt};
    if (!j.at("violates").is_null())
      l.violates = requirement_from_string(j.at("violates").get<std::string>());
    out.push_back(l);
  }
  return out;
}

}  // namespace

TEST_CASE("parse_document examples") {
  auto doc = parse_document(kCompliant);
  REQUIRE(doc.think.has_value());
  CHECK(doc.sections.size() >= 1);
  CHECK(doc.code_blocks.size() == 1);
  CHECK(doc.code_blocks[0].language == "smiles");
  CHECK(doc.defects.empty());

  auto open = parse_document("## A\n\n```smiles\nCCO\n");
  CHECK(open.code_blocks.empty());
  CHECK(open.has_defect(DefectKind::kUnterminatedFence));

  auto empty = parse_document("");
  CHECK_FALSE(empty.think.has_value());
  CHECK(empty.sections.empty());
  CHECK(empty.code_blocks.empty());
  CHECK(empty.lists.empty());
  CHECK(empty.tables.empty());
  CHECK(empty.defects.empty());
}

TEST_CASE("think block position and spans") {
  auto late = parse_document("## A\n\n<think>x</think>\n");
  CHECK(late.has_defect(DefectKind::kThinkNotFirst));
  CHECK(parse_document("<think>\nopen").has_defect(DefectKind::kUnterminatedThink));
  CHECK(parse_document("<think>a</think>\n<think>b</think>\n")
            .has_defect(DefectKind::kRepeatedThink));

  auto doc = parse_document(kCompliant);
  for (const auto &s : doc.sections)
    CHECK(doc.think->span.end <= s.span.begin);
  for (std::size_t i = 1; i < doc.sections.size(); ++i)
    CHECK(doc.sections[i - 1].span.end <= doc.sections[i].span.begin);
}

TEST_CASE("check_format examples") {
  auto ok = check(kCompliant);
  CHECK(ok.adherent);
  for (Requirement r : kAllRequirements)
    CHECK(ok.verdict(r) != Verdict::kFail);

  std::string no_summary = kCompliant;
  no_summary.replace(no_summary.find("## Summary"), 10, "## Outro");
  auto ns = check(no_summary);
  CHECK(ns.verdict(Requirement::kSectionHeaders) == Verdict::kFail);
  CHECK_FALSE(ns.adherent);

  auto mixed = check(std::string(kCompliant) + "\n- one\n1. two\n");
  CHECK(mixed.verdict(Requirement::kBulletedLists) == Verdict::kFail);
  CHECK_FALSE(mixed.adherent);

  CHECK(ok.verdict(Requirement::kTabularData) == Verdict::kNotApplicable);
  CHECK(check("plain text").verdict(Requirement::kSectionHeaders) == Verdict::kFail);
}

TEST_CASE("requirement rules") {
  const std::string base = kCompliant;
  auto with = [&](const std::string &extra) { return check(base + "\n" + extra + "\n"); };
  CHECK(with("| a | b |\n|---|---|\n| 1 | 2 |").verdict(Requirement::kTabularData) ==
        Verdict::kPass);
  CHECK(with("| a | b |\n|---|---|\n| 1 |").verdict(Requirement::kTabularData) ==
        Verdict::kFail);
  CHECK(with("```json\n{\"a\": [1, 2]}\n```").verdict(Requirement::kJsonStructures) ==
        Verdict::kPass);
  CHECK(with("```json\n{\"a\": [1, 2}\n```").verdict(Requirement::kJsonStructures) ==
        Verdict::kFail);
  CHECK(with("CCO -> CC=O").verdict(Requirement::kChemicalEquations) == Verdict::kPass);
  CHECK(with("CCO → CC=O").verdict(Requirement::kChemicalEquations) == Verdict::kPass);
  CHECK(with("CCO => CC=O").verdict(Requirement::kChemicalEquations) == Verdict::kFail);
  CHECK(with("CCO ->").verdict(Requirement::kChemicalEquations) == Verdict::kFail);
  CHECK(with("a **b** and *c*").verdict(Requirement::kMarkdownFormatting) == Verdict::kPass);
  CHECK(with("a **b and c").verdict(Requirement::kMarkdownFormatting) == Verdict::kFail);
  CHECK(with("snake_case_name and 2 * 3").verdict(Requirement::kMarkdownFormatting) !=
        Verdict::kFail);
  CHECK(with("***a** b").verdict(Requirement::kMarkdownFormatting) == Verdict::kFail);
  CHECK(with("***a*** b").verdict(Requirement::kMarkdownFormatting) == Verdict::kPass);
  CHECK(with("```\nCCO\n```").verdict(Requirement::kSmilesCodeBlocks) == Verdict::kFail);
  CHECK(with("```python\nprint('hi')\n```").verdict(Requirement::kSmilesCodeBlocks) ==
        Verdict::kPass);
}

TEST_CASE("extract_smiles") {
  CHECK(extract_smiles(parse_document("```smiles\nCCO\n```\n")) ==
        std::vector<std::string>{"CCO"});
  auto two = parse_document("```smiles\nC\n```\ntext\n```smiles\n  N \n\nO\n```\n");
  CHECK(extract_smiles(two) == std::vector<std::string>{"C", "N", "O"});

  auto untagged = parse_document("<think>\nx\n</think>\n\n## Summary\n\n```\nCCO\n```\n");
  CHECK(extract_smiles(untagged).empty());
  CHECK(check_format(untagged).verdict(Requirement::kSmilesCodeBlocks) == Verdict::kFail);
}

TEST_CASE("analyze_reasoning") {
  std::string seven;
  for (int i = 1; i <= 7; ++i)
    seven += std::to_string(i) + ". Consideration number " + std::to_string(i) + ".\n";
  CHECK(analyze_reasoning(seven).step_count == 7);

  CHECK(analyze_reasoning("We might expect competitive O-alkylation.").confidence ==
        Confidence::kModerate);
  auto empty = analyze_reasoning("");
  CHECK(empty.step_count == 0);
  CHECK(empty.confidence == Confidence::kUnstated);

  CHECK(analyze_reasoning("This clearly works.").confidence == Confidence::kHigh);
  CHECK(analyze_reasoning("This clearly works but may be unclear.").confidence ==
        Confidence::kLow);
  CHECK(analyze_reasoning("First, look at the ring. Then add base. However, heat is bad.")
            .step_count == 3);
  CHECK(analyze_reasoning("- a\n- b\n").step_count == 2);
  CHECK(analyze_reasoning("The ring is aromatic.").step_count >= 0);
}

TEST_CASE("corpus adherence rate") {
  std::vector<FormatReport> reports(4);
  reports[0].adherent = reports[1].adherent = reports[2].adherent = true;
  CHECK(corpus_adherence_rate(reports).point == doctest::Approx(0.75));

  std::vector<FormatReport> all(3);
  for (auto &r : all)
    r.adherent = true;
  CHECK(corpus_adherence_rate(all).point == 1.0);

  std::vector<FormatReport> big(500);
  for (int i = 0; i < 500; ++i)
    big[i].adherent = i < 481;
  auto rate = corpus_adherence_rate(big);
  CHECK(rate.point == doctest::Approx(0.962));
  CHECK(rate.half_width() == doctest::Approx(0.0169).epsilon(0.03));

  std::vector<FormatReport> none;
  CHECK_THROWS(corpus_adherence_rate(none));
}

TEST_CASE("golden corpus labels") {
  const auto labels = golden();
  REQUIRE(labels.size() == 30);
  for (const auto &l : labels) {
    auto rep = check(slurp(std::string(CHEMEVAL_FIXTURES "/protocol/") + l.file));
    for (Requirement r : kAllRequirements) {
      const bool expect_fail = l.violates && *l.violates == r;
      CHECK_MESSAGE((rep.verdict(r) == Verdict::kFail) == expect_fail,
                    l.file << " " << to_string(r) << ": " << rep.reason(r));
    }
    CHECK_MESSAGE(rep.adherent == !l.violates.has_value(), l.file);
  }
}

TEST_CASE("parser totality on random bytes") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "#`*_-|{}[]<>/thinkTHINK \n\t0123456789.CcOoN=()";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const int len = static_cast<int>(rng() % 200);
    for (int i = 0; i < len; ++i)
      text += rng() % 4 == 0 ? static_cast<char>(rng() % 256)
                             : alphabet[rng() % alphabet.size()];
    if (trial % 3 == 0)
      text = "<think>\n" + text;
    CHECK_NOTHROW({
      auto doc = parse_document(text);
      auto rep = check_format(doc);
      (void)extract_smiles(doc);
      (void)to_jsonl(rep, doc);
    });
  }
}

TEST_CASE("extracted smiles occur inside smiles fences") {
  for (const auto &l : golden()) {
    const auto text = slurp(std::string(CHEMEVAL_FIXTURES "/protocol/") + l.file);
    const auto doc = parse_document(text);
    for (const auto &s : extract_smiles(doc)) {
      bool found = false;
      for (const auto &cb : doc.code_blocks)
        if (cb.language == "smiles" && cb.content.find(s) != std::string::npos &&
            text.find(cb.content) != std::string::npos)
          found = true;
      CHECK_MESSAGE(found, l.file << " " << s);
    }
  }
}

TEST_CASE("adherence is the conjunction of mandatory verdicts") {
  Profile everything;
  for (Requirement r : kAllRequirements)
    everything.set_mandatory(r, true);
  Profile nothing;
  for (const auto &l : golden()) {
    const auto doc =
        parse_document(slurp(std::string(CHEMEVAL_FIXTURES "/protocol/") + l.file));
    for (const Profile &p : {Profile::default_template(), everything, nothing}) {
      auto rep = check_format(doc, p);
      bool all = true;
      for (Requirement r : kAllRequirements) {
        if (p.is_mandatory(r) || rep.verdict(r) != Verdict::kNotApplicable)
          all = all && rep.verdict(r) == Verdict::kPass;
      }
      CHECK_MESSAGE(rep.adherent == all, l.file);
    }
    // Making more requirements mandatory never turns a failing doc adherent.
    if (!check_format(doc, nothing).adherent)
      CHECK_FALSE(check_format(doc, everything).adherent);
  }
}

TEST_CASE("profile parsing") {
  std::istringstream ok("# comment\nsection_headers = mandatory\ntabular_data=optional\n\n");
  auto p = Profile::parse(ok);
  CHECK(p.is_mandatory(Requirement::kSectionHeaders));
  CHECK_FALSE(p.is_mandatory(Requirement::kTabularData));
  CHECK_FALSE(p.is_mandatory(Requirement::kSmilesCodeBlocks));

  std::istringstream bad_name("frobnicate = mandatory\n");
  CHECK_THROWS_AS(Profile::parse(bad_name), ProfileError);
  std::istringstream bad_value("tabular_data = sometimes\n");
  CHECK_THROWS_AS(Profile::parse(bad_value), ProfileError);
  std::istringstream no_eq("tabular_data\n");
  CHECK_THROWS_AS(Profile::parse(no_eq), ProfileError);

  auto d = Profile::default_template();
  CHECK(d.is_mandatory(Requirement::kSectionHeaders));
  CHECK(d.is_mandatory(Requirement::kSmilesCodeBlocks));
  CHECK_FALSE(d.is_mandatory(Requirement::kTabularData));
}

TEST_CASE("report line format") {
  auto doc = parse_document(kCompliant);
  auto j = nlohmann::json::parse(to_jsonl(check_format(doc), doc));
  CHECK(j.is_object());
  CHECK(j.dump().find("section_headers") != std::string::npos);
}
