//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/stats/agreement.h"

#include <algorithm>

#include "chemeval/stats/errors.h"

namespace chemeval::stats {

double krippendorff_alpha(const RatingMatrix &ratings, AlphaMetric metric) {
  std::vector<std::vector<double>> units;
  for (const auto &row : ratings) {
    std::vector<double> values;
    for (const auto &v : row)
      if (v)
        values.push_back(*v);
    if (values.size() >= 2)
      units.push_back(std::move(values));
  }
  if (units.size() < 2)
    throw InsufficientData(
        "krippendorff_alpha: need at least two units with two ratings");

  std::vector<double> categories;
  for (const auto &u : units)
    categories.insert(categories.end(), u.begin(), u.end());
  std::sort(categories.begin(), categories.end());
  categories.erase(std::unique(categories.begin(), categories.end()),
                   categories.end());
  const std::size_t k = categories.size();
  auto index_of = [&](double v) {
    return static_cast<std::size_t>(
        std::lower_bound(categories.begin(), categories.end(), v) -
        categories.begin());
  };

  std::vector<std::vector<double>> o(k, std::vector<double>(k, 0.0));
  for (const auto &u : units) {
    const double w = 1.0 / static_cast<double>(u.size() - 1);
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j)
        if (i != j)
          o[index_of(u[i])][index_of(u[j])] += w;
  }
  std::vector<double> nc(k, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d)
      nc[c] += o[c][d];
    n += nc[c];
  }

  auto delta2 = [&](std::size_t c, std::size_t d) -> double {
    switch (metric) {
    case AlphaMetric::kNominal: return c == d ? 0.0 : 1.0;
    case AlphaMetric::kInterval: {
      const double diff = categories[c] - categories[d];
      return diff * diff;
    }
    case AlphaMetric::kOrdinal: {
      const std::size_t lo = std::min(c, d), hi = std::max(c, d);
      double s = 0.0;
      for (std::size_t g = lo; g <= hi; ++g)
        s += nc[g];
      s -= (nc[c] + nc[d]) / 2.0;
      return s * s;
    }
    }
    return 0.0;
  };

  double observed = 0.0, expected = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) {
      const double dd = delta2(c, d);
      observed += o[c][d] * dd;
      expected += nc[c] * nc[d] * dd;
    }
  }
  observed /= n;
  expected /= n * (n - 1.0);
  if (observed == 0.0)
    return 1.0;
  return 1.0 - observed / expected;
}

}  // namespace chemeval::stats
