//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "chemeval/mol/smiles.h"
#include "chemeval/validity/validity.h"
#include "enumeration.h"

using namespace chemeval::validity;
using chemeval::mol::parse_smiles;
using chemeval::mol::prepare;

namespace {

bool only_code(const ValidityReport &r, ErrorCode code) {
  if (r.errors.empty())
    return false;
  for (const auto &e : r.errors)
    if (e.code != code)
      return false;
  return true;
}

}  // namespace

TEST_CASE("validity examples") {
  auto five = validate("C(C)(C)(C)(C)C");
  CHECK(five.stage == Stage::kPossibility);
  REQUIRE(only_code(five, ErrorCode::kIncorrectValence));
  CHECK(five.errors[0].locus.str() == "atom:0");

  CHECK(validate("CC(=O)O").valid());
  CHECK(validate("CC(=O)O").errors.empty());

  auto ring = validate("C1CC");
  CHECK(ring.stage == Stage::kSyntax);
  CHECK(only_code(ring, ErrorCode::kRingClosureError));

  auto marks = validate("F/C(/F)=C");
  CHECK(marks.stage == Stage::kSanity);
  CHECK(marks.has(ErrorCode::kInvalidStereochemistry));
}

TEST_CASE("syntax subclasses") {
  CHECK(only_code(validate("C(C"), ErrorCode::kMismatchedBrackets));
  CHECK(validate("C(C").errors[0].locus.str() == "pos:3");
  CHECK(only_code(validate("CC)"), ErrorCode::kMismatchedBrackets));
  CHECK(only_code(validate("C%1"), ErrorCode::kRingClosureError));
  CHECK(only_code(validate("C=C=(C)"), ErrorCode::kInvalidSyntax));
  CHECK(only_code(validate("[Zz]"), ErrorCode::kInvalidSyntax));
  CHECK(only_code(validate("[0C]"), ErrorCode::kInvalidIsotope));
  CHECK(only_code(validate(""), ErrorCode::kInvalidSyntax));
}

TEST_CASE("possibility stage") {
  CHECK(only_code(validate("[3C]"), ErrorCode::kInvalidIsotope));
  CHECK(only_code(validate("[60C]"), ErrorCode::kInvalidIsotope));
  CHECK(validate("[14C]").valid());
  CHECK(validate("[2H]O[2H]").valid());
  auto arom = validate("c1ccc1");
  CHECK(arom.stage == Stage::kPossibility);
  CHECK(arom.has(ErrorCode::kIncorrectAromaticity));
  CHECK(validate("c1cccc1").has(ErrorCode::kIncorrectAromaticity));
  CHECK(validate("O=O=O").has(ErrorCode::kIncorrectValence));
  CHECK(validate("C=[NH3]C").has(ErrorCode::kIncorrectValence));
  CHECK(validate("C[N+](C)(C)C").valid());
  CHECK(validate("C[O-]").valid());
  CHECK(validate("FC(F)(F)(F)F").has(ErrorCode::kIncorrectValence));
  CHECK(validate("CS(=O)(=O)O").valid());
  CHECK(validate("c1ccccc1").valid());
  CHECK(validate("Cn1cnc2c1c(=O)n(C)c(=O)n2C").valid());
}

TEST_CASE("sanity stage") {
  CHECK(only_code(validate("C1#CCC1"), ErrorCode::kStrainViolation));
  CHECK(validate("C1#CCCCCCC1").valid());
  CHECK(only_code(validate("C/1=C\\CCCC1"), ErrorCode::kStrainViolation));
  CHECK(validate("C/1=C/CCCC1").valid());
  CHECK(validate("C/1=C\\CCCCCC1").valid());
  CHECK(validate("C#CC1CC1").valid());
}

TEST_CASE("stereo notation") {
  CHECK(validate("[C@H](F)(Cl)Br").valid());
  CHECK(only_code(validate("[C@H](C)(C)C"), ErrorCode::kInvalidStereochemistry));
  CHECK(validate("C[C@]1(F)CCC1").valid());
  CHECK(only_code(validate("[C@H2]C"), ErrorCode::kInvalidStereochemistry));
  CHECK(validate("F/C=C/F").valid());
  CHECK(check_stereo_notation(prepare(parse_smiles("[C@H](F)(Cl)Br"))).empty());
  CHECK(!check_stereo_notation(prepare(parse_smiles("F/C(/F)=C"))).empty());
  CHECK(check_stereo_notation(prepare(parse_smiles("F/C(/Cl)=C/F"))).empty());
  CHECK(!check_stereo_notation(prepare(parse_smiles("F/C(\\Cl)=C/F"))).empty());
}

TEST_CASE("stages are monotone and every invalid report carries a code") {
  const char *inputs[] = {"C(C", "C1CC", "c1ccc1", "C1#CC1", "[C@H](C)(C)C",
                          "CC(=O)O", "[99C]", "C=C=C=C", "N#N", "O=C=O",
                          "C(C)(C)(C)(C)C", "C/C=C/C", "F/C(/F)=C"};
  for (const char *s : inputs) {
    auto r = validate(s);
    CHECK(r.valid() == r.errors.empty());
    if (r.stage == Stage::kSyntax) {
      for (const auto &e : r.errors)
        CHECK(e.code <= ErrorCode::kInvalidIsotope);
    }
    CHECK(to_jsonl(r) == to_jsonl(validate(s)));
  }
}

TEST_CASE("report line format") {
  auto line = to_jsonl(validate("C(C)(C)(C)(C)C"));
  CHECK(line.find("\"stage\":\"possibility\"") != std::string::npos);
  CHECK(line.find("incorrect_valence") != std::string::npos);
  CHECK(line.find("atom:0") != std::string::npos);
}

TEST_CASE("corpus validity rate") {
  std::vector<ValidityReport> four{validate("C"), validate("CC"), validate("C1CC"),
                                   validate("CCO")};
  auto rate = corpus_validity_rate(four);
  CHECK(rate.point == doctest::Approx(0.75));
  std::vector<ValidityReport> all{validate("C"), validate("N")};
  CHECK(corpus_validity_rate(all).ci_high == 1.0);
  CHECK(corpus_validity_rate(all).point == 1.0);
  std::vector<ValidityReport> none;
  CHECK_THROWS_AS(corpus_validity_rate(none), chemeval::stats::EmptyCorpus);

  std::vector<ValidityReport> many;
  for (int i = 0; i < 487; ++i)
    many.push_back(validate("CCO"));
  for (int i = 0; i < 13; ++i)
    many.push_back(validate("C1CC"));
  auto big = corpus_validity_rate(many);
  CHECK(big.point == doctest::Approx(0.974));
  CHECK(big.half_width() == doctest::Approx(0.0144).epsilon(0.02));
}

TEST_CASE("small graph enumeration visits each class once") {
  // Connected simple graphs on 4 unlabelled vertices: 6. With bond orders
  // 1..3 and one colour the count is checked by brute force over labels.
  std::set<std::vector<int>> seen;
  long kept = oracle::enumerate_small_graphs(4, [&](const oracle::SmallGraph &g) {
    if (g.n != 4)
      return;
    std::vector<int> p{0, 1, 2, 3}, best;
    do {
      std::vector<int> code;
      for (int i = 0; i < 4; ++i)
        code.push_back(g.element[p[i]]);
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          code.push_back(g.order[p[i]][p[j]]);
      best = std::max(best, code);
    } while (std::next_permutation(p.begin(), p.end()));
    CHECK(seen.insert(best).second);
  });
  CHECK(kept > 0);
  long simple = 0;
  oracle::enumerate_small_graphs(4, [&](const oracle::SmallGraph &g) {
    bool plain = g.n == 4;
    for (int i = 0; i < 4 && plain; ++i)
      plain = g.element[i] == 0;
    for (int i = 0; i < g.n && plain; ++i)
      for (int j = 0; j < g.n; ++j)
        plain = plain && g.order[i][j] <= 1;
    simple += plain;
  });
  CHECK(simple == 6);
}

TEST_CASE("validator agrees with the valence-assignment oracle up to four atoms") {
  long disagreements = 0;
  oracle::enumerate_small_graphs(4, [&](const oracle::SmallGraph &g) {
    const std::string s = oracle::plain_smiles(g);
    const auto r = validate(s);
    const bool valence_ok = oracle::valence_assignable(g);
    const bool expect_valid = valence_ok && !oracle::strained(g);
    if (r.has(ErrorCode::kIncorrectValence) == valence_ok || r.valid() != expect_valid) {
      ++disagreements;
      if (disagreements < 10)
        MESSAGE(s << " " << to_jsonl(r));
    }
  });
  CHECK(disagreements == 0);
}
