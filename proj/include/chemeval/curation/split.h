//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_CURATION_SPLIT_H_
#define CHEMEVAL_CURATION_SPLIT_H_

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chemeval/curation/records.h"

namespace chemeval::curation {

enum class Split { kTrain, kValidation, kTest };

std::string_view to_string(Split s);

class RatioError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct SplitRatios {
  double train = 0.85;
  double validation = 0.10;
  double test = 0.05;

  std::array<double, 3> values() const { return {train, validation, test}; }
  /// Throws RatioError unless all three are positive and sum to 1.
  void check() const;
};

struct SplitAssignment {
  std::vector<Split> split;
  std::vector<std::string> group_key;
  std::vector<std::string> warnings;

  std::array<long, 3> counts() const;
};

/// "product:<canonical>" for reaction records, "scaffold:<canonical>" for
/// ring-bearing molecules, "acyclic:<canonical>" when the scaffold is empty,
/// and "record:<id>" when nothing parses.
std::string group_key(const DatasetRecord &r);

/// Greedy group assignment. Groups (records sharing a key) are visited by
/// size, largest first, ties broken by a seeded hash of the key; each goes
/// to the split with the largest remaining deficit against the per-category
/// targets. Input order does not affect the result.
SplitAssignment assign_groups(std::span<const std::string> keys,
                              std::span<const TaskCategory> categories,
                              const SplitRatios &ratios, std::uint64_t seed);

SplitAssignment scaffold_split(std::span<const DatasetRecord> records,
                               const SplitRatios &ratios, std::uint64_t seed);

/// {"id", "split", "group"} per record.
std::string manifest_line(const DatasetRecord &r, const SplitAssignment &a,
                          std::size_t index);

}  // namespace chemeval::curation

#endif  // CHEMEVAL_CURATION_SPLIT_H_
