//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/routes/rules.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chemeval/mol/smiles.h"
#include "chemeval/mol/substructure.h"

namespace chemeval::routes {
namespace {

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> string_list(const nlohmann::json &j, const char *key,
                                     int line) {
  std::vector<std::string> out;
  if (!j.contains(key))
    return out;
  if (!j[key].is_array())
    throw RuleTableError("line " + std::to_string(line) + ": '" + key +
                         "' must be an array");
  for (const auto &v : j[key]) {
    if (!v.is_string())
      throw RuleTableError("line " + std::to_string(line) + ": '" + key +
                           "' entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

Requirement parse_requirement(std::string text) {
  Requirement r;
  if (!text.empty() && text.front() == '!') {
    r.negated = true;
    text.erase(0, 1);
  }
  r.any_of = split(text, '|');
  return r;
}

void check_known(const RuleTable &t, const std::string &group,
                 const std::string &where) {
  if (!t.groups.count(group))
    throw RuleTableError(where + ": unknown functional group '" + group + "'");
}

}  // namespace

RuleTable parse_rule_table(std::istream &in) {
  RuleTable table;
  std::string line;
  int number = 0;
  struct Pending {
    Template t;
    int line;
  };
  std::vector<Pending> pending;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw RuleTableError("line " + std::to_string(number) + ": " + e.what());
    }
    if (j.contains("group")) {
      FunctionalGroup g;
      g.name = j["group"].get<std::string>();
      g.sources = string_list(j, "patterns", number);
      if (g.sources.empty())
        throw RuleTableError("line " + std::to_string(number) +
                             ": group without patterns");
      for (const auto &src : g.sources) {
        try {
          g.patterns.push_back(mol::parse_pattern(src));
        } catch (const mol::SyntaxError &e) {
          throw RuleTableError("line " + std::to_string(number) +
                               ": bad pattern '" + src + "': " + e.what());
        }
      }
      table.groups[g.name] = std::move(g);
    } else if (j.contains("template")) {
      Template t;
      t.id = j["template"].get<std::string>();
      for (auto &s : string_list(j, "reactants", number))
        t.reactants.push_back(parse_requirement(s));
      for (auto &s : string_list(j, "products", number))
        t.products.push_back(parse_requirement(s));
      for (auto &s : string_list(j, "incompatible", number))
        t.incompatible.push_back(split(s, '+'));
      pending.push_back({std::move(t), number});
    } else {
      throw RuleTableError("line " + std::to_string(number) +
                           ": record is neither a group nor a template");
    }
  }
  // Groups may be declared after the templates that use them.
  for (auto &p : pending) {
    const std::string where = "line " + std::to_string(p.line);
    for (const auto *side : {&p.t.reactants, &p.t.products})
      for (const auto &req : *side)
        for (const auto &g : req.any_of)
          check_known(table, g, where);
    for (const auto &entry : p.t.incompatible)
      for (const auto &g : entry)
        check_known(table, g, where);
    table.templates.push_back(std::move(p.t));
  }
  return table;
}

RuleTable load_rule_table(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw RuleTableError("cannot open rule table " + path);
  return parse_rule_table(in);
}

const RuleTable &builtin_rule_table() {
  static const RuleTable table = [] {
    std::istringstream in(builtin_rule_table_text());
    return parse_rule_table(in);
  }();
  return table;
}

std::set<std::string> groups_present(const RuleTable &table,
                                     const mol::MoleculeGraph &g) {
  std::set<std::string> out;
  for (const auto &[name, group] : table.groups) {
    for (const auto &p : group.patterns) {
      if (mol::has_substructure(g, p)) {
        out.insert(name);
        break;
      }
    }
  }
  return out;
}

namespace {

bool side_satisfies(const std::vector<std::set<std::string>> &side,
                    const Requirement &req) {
  bool any = false;
  for (const auto &present : side)
    for (const auto &g : req.any_of)
      any = any || present.count(g) > 0;
  return req.negated ? !any : any;
}

}  // namespace

TemplateMatch match_templates(const RuleTable &table, const Reaction &r) {
  std::vector<std::set<std::string>> left, right;
  std::set<std::string> left_union;
  for (const auto &g : r.reactants) {
    left.push_back(groups_present(table, g));
    left_union.insert(left.back().begin(), left.back().end());
  }
  for (const auto &g : r.products)
    right.push_back(groups_present(table, g));

  TemplateMatch out;
  for (const auto &t : table.templates) {
    bool ok = true;
    for (const auto &req : t.reactants)
      ok = ok && side_satisfies(left, req);
    for (const auto &req : t.products)
      ok = ok && side_satisfies(right, req);
    if (!ok)
      continue;
    out.matched.push_back(t.id);
    std::vector<std::string> hits;
    for (const auto &entry : t.incompatible) {
      bool all = true;
      std::string label;
      for (const auto &g : entry) {
        all = all && left_union.count(g) > 0;
        label += (label.empty() ? "" : "+") + g;
      }
      if (all)
        hits.push_back(label);
    }
    if (!hits.empty())
      out.incompatibilities[t.id] = std::move(hits);
  }
  return out;
}

}  // namespace chemeval::routes
