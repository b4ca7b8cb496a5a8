//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/curation/quality.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "chemeval/routes/reaction.h"
#include "chemeval/validity/validity.h"

namespace chemeval::curation {

namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1)
    return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(QcCheck c) {
  switch (c) {
  case QcCheck::kValidity: return "validity";
  case QcCheck::kMassBalance: return "mass_balance";
  case QcCheck::kDuplicate: return "duplicate";
  case QcCheck::kOutlier: return "outlier";
  }
  return "";
}

std::vector<double> robust_z(std::span<const double> values) {
  if (values.size() < 3)
    return {};
  const std::vector<double> v(values.begin(), values.end());
  const double m = median(v);
  std::vector<double> dev;
  dev.reserve(v.size());
  for (double x : v)
    dev.push_back(std::abs(x - m));
  const double mad = median(dev);
  if (mad == 0.0)
    return {};
  std::vector<double> z;
  z.reserve(v.size());
  for (double x : v)
    z.push_back(0.6745 * (x - m) / mad);
  return z;
}

QcReport quality_control(std::span<const DatasetRecord> records,
                         const QcOptions &options) {
  QcReport report;
  report.records = records.size();
  std::set<std::size_t> remove;
  auto flag = [&](std::size_t i, QcCheck check, std::string detail) {
    report.flags.push_back({i, check, std::move(detail)});
    ++report.counts[static_cast<std::size_t>(check)];
    if (check != QcCheck::kOutlier)
      remove.insert(i);
  };

  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto &r = records[i];
    std::vector<std::string> molecules = r.key_molecules;
    if (r.key_product)
      molecules.push_back(*r.key_product);
    for (const auto &m : molecules) {
      const auto v = validity::validate(m);
      if (!v.valid()) {
        std::string codes;
        for (const auto &e : v.errors)
          codes += (codes.empty() ? "" : ",") + std::string(validity::to_string(e.code));
        flag(i, QcCheck::kValidity, m + ": " + codes);
      }
    }
    if (r.reaction) {
      try {
        const auto rxn = routes::parse_reaction(*r.reaction);
        const auto balance = routes::check_mass_balance(rxn);
        if (!balance.balanced) {
          std::string missing;
          for (const auto &[symbol, n] : balance.deficit)
            missing += (missing.empty() ? "" : ",") + symbol + "x" + std::to_string(n);
          flag(i, QcCheck::kMassBalance, "product atoms not supplied: " + missing);
        }
      } catch (const std::exception &e) {
        flag(i, QcCheck::kValidity, std::string("reaction: ") + e.what());
      }
    }
    if (!seen.insert(dedup_key(r)).second)
      flag(i, QcCheck::kDuplicate, "same category, molecules and instruction as an earlier record");
  }

  std::map<std::string, std::vector<std::size_t>> holders;
  for (std::size_t i = 0; i < records.size(); ++i)
    for (const auto &[name, value] : records[i].properties)
      if (std::isfinite(value))
        holders[name].push_back(i);
  for (const auto &[name, idx] : holders) {
    std::vector<double> values;
    values.reserve(idx.size());
    for (std::size_t i : idx)
      values.push_back(records[i].properties.at(name));
    const auto z = robust_z(values);
    for (std::size_t k = 0; k < z.size(); ++k)
      if (std::abs(z[k]) > options.outlier_z)
        flag(idx[k], QcCheck::kOutlier,
             name + " = " + std::to_string(values[k]) + " (robust z " +
                 std::to_string(z[k]) + ")");
  }

  report.removal_candidates.assign(remove.begin(), remove.end());
  return report;
}

std::string to_jsonl(const QcFlag &flag, const DatasetRecord &record) {
  nlohmann::ordered_json j;
  j["id"] = record.id;
  j["check"] = to_string(flag.check);
  j["detail"] = flag.detail;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace chemeval::curation
