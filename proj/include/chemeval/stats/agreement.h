//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_STATS_AGREEMENT_H_
#define CHEMEVAL_STATS_AGREEMENT_H_

#include <optional>
#include <vector>

namespace chemeval::stats {

enum class AlphaMetric { kNominal, kOrdinal, kInterval };

/// ratings[unit][rater]; std::nullopt marks a missing rating.
using RatingMatrix = std::vector<std::vector<std::optional<double>>>;

/// Krippendorff's alpha from the coincidence matrix. Throws InsufficientData
/// unless at least two units carry two or more ratings.
double krippendorff_alpha(const RatingMatrix &ratings, AlphaMetric metric);

}  // namespace chemeval::stats

#endif  // CHEMEVAL_STATS_AGREEMENT_H_
