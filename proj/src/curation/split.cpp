//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/curation/split.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "chemeval/mol/scaffold.h"
#include "chemeval/mol/smiles.h"

namespace chemeval::curation {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t seeded_hash(std::string_view key, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix(h ^ mix(seed));
}

struct Group {
  std::string key;
  std::vector<std::size_t> members;
  std::array<long, kAllCategories.size()> per_category{};
  std::uint64_t tiebreak = 0;
};

std::string one_decimal(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

}  // namespace

std::string_view to_string(Split s) {
  switch (s) {
  case Split::kTrain: return "train";
  case Split::kValidation: return "validation";
  case Split::kTest: return "test";
  }
  return "";
}

void SplitRatios::check() const {
  for (double v : values())
    if (!(v > 0.0) || !std::isfinite(v))
      throw RatioError("split ratios must all be positive");
  const double sum = train + validation + test;
  if (std::abs(sum - 1.0) > 1e-9)
    throw RatioError("split ratios must sum to 1 (got " + std::to_string(sum) +
                     ")");
}

std::array<long, 3> SplitAssignment::counts() const {
  std::array<long, 3> c{};
  for (Split s : split)
    ++c[static_cast<std::size_t>(s)];
  return c;
}

std::string group_key(const DatasetRecord &r) {
  try {
    if (r.key_product)
      return "product:" + mol::canonical_smiles(*r.key_product);
    if (!r.key_molecules.empty()) {
      const auto g = mol::prepare(mol::parse_smiles(r.key_molecules.front()));
      const auto scaffold = mol::bemis_murcko_scaffold(g);
      if (scaffold.is_empty)
        return "acyclic:" + mol::write_canonical_smiles(g);
      return "scaffold:" + mol::write_canonical_smiles(scaffold.graph);
    }
  } catch (const std::exception &) {
  }
  return "record:" + r.id;
}

SplitAssignment assign_groups(std::span<const std::string> keys,
                              std::span<const TaskCategory> categories,
                              const SplitRatios &ratios, std::uint64_t seed) {
  ratios.check();
  if (keys.size() != categories.size())
    throw std::invalid_argument("assign_groups: keys and categories differ in length");

  std::map<std::string_view, Group> by_key;
  std::array<long, kAllCategories.size()> category_size{};
  for (std::size_t i = 0; i < keys.size(); ++i) {
    Group &g = by_key[keys[i]];
    g.members.push_back(i);
    ++g.per_category[static_cast<std::size_t>(categories[i])];
    ++category_size[static_cast<std::size_t>(categories[i])];
  }
  std::vector<Group> groups;
  groups.reserve(by_key.size());
  for (auto &[key, g] : by_key) {
    g.key = std::string(key);
    g.tiebreak = seeded_hash(key, seed);
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(), [](const Group &a, const Group &b) {
    if (a.members.size() != b.members.size())
      return a.members.size() > b.members.size();
    if (a.tiebreak != b.tiebreak)
      return a.tiebreak < b.tiebreak;
    return a.key < b.key;
  });

  const auto r = ratios.values();
  std::array<std::array<double, 3>, kAllCategories.size()> deficit{};
  for (std::size_t c = 0; c < kAllCategories.size(); ++c)
    for (std::size_t s = 0; s < 3; ++s)
      deficit[c][s] = r[s] * static_cast<double>(category_size[c]);

  SplitAssignment out;
  out.split.assign(keys.size(), Split::kTrain);
  out.group_key.assign(keys.begin(), keys.end());
  for (const Group &g : groups) {
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t s = 0; s < 3; ++s) {
      double score = 0.0;
      for (std::size_t c = 0; c < kAllCategories.size(); ++c)
        score += static_cast<double>(g.per_category[c]) * deficit[c][s];
      if (s == 0 || score > best_score) {
        best = s;
        best_score = score;
      }
    }
    for (std::size_t c = 0; c < kAllCategories.size(); ++c)
      deficit[c][best] -= static_cast<double>(g.per_category[c]);
    for (std::size_t i : g.members)
      out.split[i] = static_cast<Split>(best);
  }

  const double n = static_cast<double>(keys.size());
  if (groups.size() == 1 && keys.size() > 1)
    out.warnings.push_back("all " + std::to_string(keys.size()) +
                           " records share one group; it cannot be divided");
  const auto realized = out.counts();
  for (std::size_t s = 0; s < 3; ++s) {
    const double target = r[s] * n;
    const double shortfall = target - static_cast<double>(realized[s]);
    if ((realized[s] == 0 && target > 0.0) ||
        shortfall > std::max(1.0, 0.01 * n))
      out.warnings.push_back(
          "split " + std::string(to_string(static_cast<Split>(s))) +
          " underfilled: " + std::to_string(realized[s]) + " of " +
          one_decimal(target) + " target records");
  }
  return out;
}

SplitAssignment scaffold_split(std::span<const DatasetRecord> records,
                               const SplitRatios &ratios, std::uint64_t seed) {
  ratios.check();
  std::vector<std::string> keys;
  std::vector<TaskCategory> categories;
  keys.reserve(records.size());
  categories.reserve(records.size());
  for (const auto &r : records) {
    keys.push_back(group_key(r));
    categories.push_back(r.task_category);
  }
  return assign_groups(keys, categories, ratios, seed);
}

std::string manifest_line(const DatasetRecord &r, const SplitAssignment &a,
                          std::size_t index) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["split"] = to_string(a.split[index]);
  j["group"] = a.group_key[index];
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace chemeval::curation
