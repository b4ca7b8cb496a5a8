//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/stats/proportions.h"

#include <algorithm>
#include <cmath>

#include "chemeval/stats/distributions.h"

namespace chemeval::stats {

RateEstimate wilson_interval(double point, long trials, double confidence) {
  if (trials < 1)
    throw DomainError("wilson_interval: trials must be >= 1");
  if (!(point >= 0.0 && point <= 1.0))
    throw DomainError("wilson_interval: point must lie in [0, 1]");
  const double z = z_for_confidence(confidence);
  const double n = static_cast<double>(trials);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (point + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(point * (1.0 - point) / n + z2 / (4.0 * n * n)) / denom;

  RateEstimate r;
  r.successes = std::lround(point * n);
  r.trials = trials;
  r.point = point;
  r.confidence_level = confidence;
  r.ci_low = point == 0.0 ? 0.0 : std::clamp(center - half, 0.0, point);
  r.ci_high = point == 1.0 ? 1.0 : std::clamp(center + half, point, 1.0);
  return r;
}

RateEstimate wilson_from_counts(long successes, long trials,
                                double confidence) {
  if (successes < 0 || successes > trials)
    throw DomainError("wilson_from_counts: successes out of range");
  auto r = wilson_interval(
      static_cast<double>(successes) / static_cast<double>(trials), trials,
      confidence);
  r.successes = successes;
  return r;
}

McNemarResult mcnemar(long b, long c, McNemarMethod method) {
  if (b < 0 || c < 0)
    throw DomainError("mcnemar: counts must be non-negative");
  McNemarResult r;
  const long n = b + c;
  if (n == 0)
    return r;
  const double diff =
      std::max(std::abs(static_cast<double>(b - c)) - 1.0, 0.0);
  r.statistic = diff * diff / static_cast<double>(n);
  const bool exact = method == McNemarMethod::kExactBinomial ||
                     (method == McNemarMethod::kAuto && n < 25);
  r.p = exact ? binomial_two_sided_half(b, n) : chi_square_sf_1df(r.statistic);
  return r;
}

double cohens_h(double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0))
    throw DomainError("cohens_h: proportions must lie in [0, 1]");
  return 2.0 * std::asin(std::sqrt(p1)) - 2.0 * std::asin(std::sqrt(p2));
}

TostResult tost_two_proportions(double p1, long n1, double p2, long n2,
                                double margin, double alpha) {
  if (!(margin > 0.0))
    throw DomainError("tost: margin must be positive");
  if (n1 < 1 || n2 < 1)
    throw DomainError("tost: counts must be >= 1");
  if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0))
    throw DomainError("tost: proportions must lie in [0, 1]");

  TostResult r;
  r.difference = p1 - p2;
  r.standard_error = std::sqrt(p1 * (1.0 - p1) / static_cast<double>(n1) +
                               p2 * (1.0 - p2) / static_cast<double>(n2));
  if (r.standard_error == 0.0) {
    const bool inside = std::abs(r.difference) < margin;
    r.equivalent = inside;
    r.p_lower = r.p_upper = inside ? 0.0 : 1.0;
    return r;
  }
  // H0: d <= -margin and H0: d >= +margin.
  r.p_lower = normal_sf((r.difference + margin) / r.standard_error);
  r.p_upper = normal_cdf((r.difference - margin) / r.standard_error);
  r.equivalent = r.p_lower < alpha && r.p_upper < alpha;
  return r;
}

std::vector<double> bonferroni(std::span<const double> pvalues,
                               std::optional<std::size_t> family_size) {
  const std::size_t m = family_size.value_or(pvalues.size());
  if (m < 1 && !pvalues.empty())
    throw DomainError("bonferroni: family size must be >= 1");
  std::vector<double> out;
  out.reserve(pvalues.size());
  for (double p : pvalues) {
    if (!(p >= 0.0 && p <= 1.0))
      throw DomainError("bonferroni: p-values must lie in [0, 1]");
    out.push_back(std::min(1.0, static_cast<double>(m) * p));
  }
  return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw DomainError("pearson: need two equal-length samples of size >= 2");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw ZeroVariance("pearson: a sample has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<ComparisonResult> compare_models(const VerdictTable &table,
                                             double margin, double alpha,
                                             double confidence,
                                             McNemarMethod method) {
  std::vector<ComparisonResult> out;
  const std::size_t m = table.models.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      ComparisonResult r;
      r.model_a = table.models[i];
      r.model_b = table.models[j];
      long ok_a = 0, ok_b = 0;
      for (std::size_t t = 0; t < table.tasks.size(); ++t) {
        const auto &va = table.verdicts[i][t];
        const auto &vb = table.verdicts[j][t];
        if (!va || !vb)
          continue;
        ++r.paired_tasks;
        ok_a += *va;
        ok_b += *vb;
        r.only_a += *va && !*vb;
        r.only_b += !*va && *vb;
      }
      if (r.paired_tasks == 0)
        continue;
      r.rate_a = wilson_from_counts(ok_a, r.paired_tasks, confidence);
      r.rate_b = wilson_from_counts(ok_b, r.paired_tasks, confidence);
      const auto mc = mcnemar(r.only_a, r.only_b, method);
      r.mcnemar_statistic = mc.statistic;
      r.mcnemar_p = mc.p;
      r.cohens_h = cohens_h(r.rate_a.point, r.rate_b.point);
      r.tost = tost_two_proportions(r.rate_a.point, r.paired_tasks,
                                    r.rate_b.point, r.paired_tasks, margin,
                                    alpha);
      out.push_back(std::move(r));
    }
  }
  std::vector<double> raw;
  for (const auto &r : out)
    raw.push_back(r.mcnemar_p);
  const auto adjusted = bonferroni(raw);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k].adjusted_p = adjusted[k];
  return out;
}

}  // namespace chemeval::stats
