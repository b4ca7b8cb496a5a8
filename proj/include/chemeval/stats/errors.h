//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_STATS_ERRORS_H_
#define CHEMEVAL_STATS_ERRORS_H_

#include <stdexcept>

namespace chemeval::stats {

class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class ZeroVariance : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised by corpus-level rate computations on an empty input.
class EmptyCorpus : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class InsufficientData : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

}  // namespace chemeval::stats

#endif  // CHEMEVAL_STATS_ERRORS_H_
