//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_STATS_DISTRIBUTIONS_H_
#define CHEMEVAL_STATS_DISTRIBUTIONS_H_

namespace chemeval::stats {

double normal_cdf(double x);
/// Upper tail, 1 - normal_cdf(x), without cancellation for large x.
double normal_sf(double x);
/// Inverse of normal_cdf on (0, 1). Throws DomainError outside.
double normal_quantile(double p);
/// Two-sided critical value for a confidence level, e.g. 1.959964 for 0.95.
double z_for_confidence(double confidence);
/// Upper tail of the chi-square distribution with one degree of freedom.
double chi_square_sf_1df(double x);
/// Two-sided exact binomial test of k successes in n trials at p = 1/2.
double binomial_two_sided_half(long k, long n);

}  // namespace chemeval::stats

#endif  // CHEMEVAL_STATS_DISTRIBUTIONS_H_
