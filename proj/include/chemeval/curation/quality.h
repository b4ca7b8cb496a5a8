//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_CURATION_QUALITY_H_
#define CHEMEVAL_CURATION_QUALITY_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chemeval/curation/records.h"

namespace chemeval::curation {

enum class QcCheck { kValidity, kMassBalance, kDuplicate, kOutlier };

inline constexpr std::array kAllChecks{QcCheck::kValidity, QcCheck::kMassBalance,
                                       QcCheck::kDuplicate, QcCheck::kOutlier};

std::string_view to_string(QcCheck c);

struct QcOptions {
  /// Robust z threshold: 0.6745 (x - median) / MAD.
  double outlier_z = 4.0;
};

struct QcFlag {
  std::size_t record = 0;
  QcCheck check = QcCheck::kValidity;
  std::string detail;
};

struct QcReport {
  std::size_t records = 0;
  std::array<long, kAllChecks.size()> counts{};
  std::vector<QcFlag> flags;
  /// Records failing validity, balance or duplicate checks. Outliers are
  /// flagged for review only.
  std::vector<std::size_t> removal_candidates;

  long count(QcCheck c) const { return counts[static_cast<std::size_t>(c)]; }
};

/// Robust z-score per value; empty when fewer than three values or MAD = 0.
std::vector<double> robust_z(std::span<const double> values);

QcReport quality_control(std::span<const DatasetRecord> records,
                         const QcOptions &options = {});

std::string to_jsonl(const QcFlag &flag, const DatasetRecord &record);

}  // namespace chemeval::curation

#endif  // CHEMEVAL_CURATION_QUALITY_H_
