//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_STATS_PROPORTIONS_H_
#define CHEMEVAL_STATS_PROPORTIONS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chemeval/stats/errors.h"

namespace chemeval::stats {

struct RateEstimate {
  long successes = 0;
  long trials = 0;
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double confidence_level = 0.95;

  double half_width() const { return (ci_high - ci_low) / 2.0; }
};

RateEstimate wilson_interval(double point, long trials,
                             double confidence = 0.95);
RateEstimate wilson_from_counts(long successes, long trials,
                                double confidence = 0.95);

enum class McNemarMethod {
  kCorrectedChiSquare,
  kExactBinomial,
  /// Exact binomial below 25 discordant pairs, corrected chi-square above.
  kAuto,
};

struct McNemarResult {
  double statistic = 0.0;
  double p = 1.0;
};

/// b and c are the discordant counts. The statistic is always the
/// continuity-corrected chi-square; `method` only selects how p is computed.
McNemarResult mcnemar(long b, long c,
                      McNemarMethod method = McNemarMethod::kCorrectedChiSquare);

double cohens_h(double p1, double p2);

struct TostResult {
  bool equivalent = false;
  double p_lower = 1.0;
  double p_upper = 1.0;
  double difference = 0.0;
  double standard_error = 0.0;
};

TostResult tost_two_proportions(double p1, long n1, double p2, long n2,
                                double margin, double alpha = 0.05);

std::vector<double> bonferroni(std::span<const double> pvalues,
                               std::optional<std::size_t> family_size = {});

double pearson(std::span<const double> xs, std::span<const double> ys);

struct ComparisonResult {
  std::string model_a;
  std::string model_b;
  long paired_tasks = 0;
  RateEstimate rate_a;
  RateEstimate rate_b;
  long only_a = 0;  // a correct, b wrong
  long only_b = 0;
  double mcnemar_statistic = 0.0;
  double mcnemar_p = 1.0;
  double cohens_h = 0.0;
  TostResult tost;
  double adjusted_p = 1.0;
};

/// Per-task binary verdicts: verdicts[model][task], missing entries allowed.
struct VerdictTable {
  std::vector<std::string> models;
  std::vector<std::string> tasks;
  std::vector<std::vector<std::optional<bool>>> verdicts;
};

/// All pairwise comparisons on tasks both models answered. McNemar p-values
/// are Bonferroni-adjusted over the family of pairs.
std::vector<ComparisonResult>
compare_models(const VerdictTable &table, double margin = 0.05,
               double alpha = 0.05, double confidence = 0.95,
               McNemarMethod method = McNemarMethod::kCorrectedChiSquare);

}  // namespace chemeval::stats

#endif  // CHEMEVAL_STATS_PROPORTIONS_H_
