//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_ROUTES_CONDITIONS_H_
#define CHEMEVAL_ROUTES_CONDITIONS_H_

#include <string>
#include <string_view>
#include <vector>

namespace chemeval::routes {

struct Conditions {
  /// Every temperature mentioned, in degrees Celsius (range ends included).
  std::vector<double> temperatures_c;
  /// Every pressure mentioned, in atmospheres.
  std::vector<double> pressures_atm;
};

/// Extracts numeric temperatures (C, F, K, "rt") and pressures (atm, bar,
/// psi, Pa, kPa, MPa, torr, mmHg) from free text.
Conditions parse_conditions(std::string_view text);

struct ConditionBounds {
  double min_temperature_c = -100.0;
  double max_temperature_c = 300.0;
  double max_pressure_atm = 100.0;
};

/// Out-of-bounds findings; empty means reasonable (including no conditions).
std::vector<std::string> condition_issues(const Conditions &c,
                                          const ConditionBounds &bounds = {});

}  // namespace chemeval::routes

#endif  // CHEMEVAL_ROUTES_CONDITIONS_H_
