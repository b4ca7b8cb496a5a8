//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/routes/conditions.h"

#include <cstdio>
#include <regex>
#include <string>

namespace chemeval::routes {
namespace {

enum class Quantity { kTemperature, kPressure };

struct Unit {
  Quantity quantity;
  double scale;
  double offset;
};

Unit unit_of(const std::string &u) {
  if (u == "K")
    return {Quantity::kTemperature, 1.0, -273.15};
  if (u.back() == 'F')
    return {Quantity::kTemperature, 5.0 / 9.0, -32.0 * 5.0 / 9.0};
  if (u.back() == 'C' || u == "\xE2\x84\x83")
    return {Quantity::kTemperature, 1.0, 0.0};
  if (u == "atm" || u == "ATM")
    return {Quantity::kPressure, 1.0, 0.0};
  if (u == "bar")
    return {Quantity::kPressure, 0.986923, 0.0};
  if (u == "mbar")
    return {Quantity::kPressure, 0.000986923, 0.0};
  if (u == "psi")
    return {Quantity::kPressure, 0.0680460, 0.0};
  if (u == "kPa")
    return {Quantity::kPressure, 0.00986923, 0.0};
  if (u == "MPa")
    return {Quantity::kPressure, 9.86923, 0.0};
  if (u == "Pa")
    return {Quantity::kPressure, 9.86923e-6, 0.0};
  // torr, Torr, mmHg
  return {Quantity::kPressure, 1.0 / 760.0, 0.0};
}

double to_number(std::string s) {
  const std::string minus = "\xE2\x88\x92";
  if (s.rfind(minus, 0) == 0)
    s = "-" + s.substr(minus.size());
  return std::stod(s);
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

Conditions parse_conditions(std::string_view text) {
  static const std::regex quantity(
      "(?:^|[^\\w.])"
      "((?:-|\xE2\x88\x92)?\\d+(?:\\.\\d+)?)\\s*"
      "(?:(?:-|\xE2\x80\x93|to)\\s*((?:-|\xE2\x88\x92)?\\d+(?:\\.\\d+)?)\\s*)?"
      "(\xC2\xB0\\s*C|\xC2\xBA\\s*C|\xE2\x84\x83|degC|deg C|\xC2\xB0\\s*F|"
      "\xC2\xBA\\s*F|degF|mbar|mmHg|torr|Torr|atm|ATM|bar|psi|kPa|MPa|Pa|K|C|F)"
      "(?![A-Za-z])");
  static const std::regex room(
      "(?:^|[^A-Za-z])(rt|r\\.t\\.|room temperature|ambient temperature)"
      "(?![A-Za-z])",
      std::regex::icase);

  Conditions c;
  const std::string s(text);
  for (std::sregex_iterator it(s.begin(), s.end(), quantity), end; it != end;
       ++it) {
    const auto &m = *it;
    const Unit u = unit_of(m[3].str());
    auto &dest = u.quantity == Quantity::kTemperature ? c.temperatures_c
                                                      : c.pressures_atm;
    dest.push_back(to_number(m[1].str()) * u.scale + u.offset);
    if (m[2].matched)
      dest.push_back(to_number(m[2].str()) * u.scale + u.offset);
  }
  for (std::sregex_iterator it(s.begin(), s.end(), room), end; it != end; ++it)
    c.temperatures_c.push_back(25.0);
  return c;
}

std::vector<std::string> condition_issues(const Conditions &c,
                                          const ConditionBounds &bounds) {
  std::vector<std::string> out;
  for (double t : c.temperatures_c)
    if (t < bounds.min_temperature_c || t > bounds.max_temperature_c)
      out.push_back("temperature " + format(t) + " C outside [" +
                    format(bounds.min_temperature_c) + ", " +
                    format(bounds.max_temperature_c) + "]");
  for (double p : c.pressures_atm)
    if (p <= 0.0 || p > bounds.max_pressure_atm)
      out.push_back("pressure " + format(p) + " atm outside (0, " +
                    format(bounds.max_pressure_atm) + "]");
  return out;
}

}  // namespace chemeval::routes
