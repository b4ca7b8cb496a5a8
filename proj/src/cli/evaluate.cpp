//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/cli/evaluate.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chemeval/routes/rules.h"
#include "chemeval/validity/validity.h"

namespace chemeval::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string dump(const ordered_json &j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string percent(const stats::RateEstimate &r) {
  if (r.trials == 0)
    return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f%% (\xC2\xB1%.1f%%)", 100.0 * r.point,
                100.0 * r.half_width());
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  // Count UTF-8 code points so the ± sign does not skew columns.
  std::size_t shown = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80)
      ++shown;
  if (shown < width)
    s.append(width - shown, ' ');
  return s;
}

}  // namespace

std::vector<DocumentMeta> read_manifest(const fs::path &outputs_dir) {
  const fs::path path = outputs_dir / "manifest.jsonl";
  std::ifstream in(path);
  if (!in)
    throw MetadataMissing("no manifest.jsonl in " + outputs_dir.string());
  std::vector<DocumentMeta> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const std::string where = path.string() + ":" + std::to_string(number);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error &) {
      throw MetadataMissing(where + ": malformed JSON");
    }
    auto field = [&](const char *name) {
      if (!j.contains(name) || !j[name].is_string())
        throw MetadataMissing(where + ": missing '" + name + "'");
      return j[name].get<std::string>();
    };
    DocumentMeta meta;
    meta.file = field("file");
    meta.model = field("model");
    meta.task_id = field("task_id");
    const std::string category = field("task_category");
    const auto cat = curation::category_from_string(category);
    if (!cat)
      throw MetadataMissing(where + ": unknown task_category '" + category + "'");
    meta.category = *cat;
    if (j.contains("difficulty") && j["difficulty"].is_string())
      meta.difficulty = j["difficulty"].get<std::string>();
    out.push_back(std::move(meta));
  }
  return out;
}

bool expects_route(curation::TaskCategory c) {
  return c == curation::TaskCategory::kForwardSynthesis ||
         c == curation::TaskCategory::kRetrosynthesis;
}

std::optional<std::string> extract_route(const protocol::StructuredDoc &doc) {
  for (const auto &b : doc.code_blocks)
    if (b.language == "route")
      return b.content;
  static const std::regex route_line(
      R"(^\s*(?:STEP\s+\d+\s*:|TARGET\s*:|STARTING\s+MATERIALS\s*:))",
      std::regex::icase);
  static const std::regex step_line(R"(^\s*STEP)", std::regex::icase);
  std::string text;
  bool has_step = false;
  for (const auto &line : doc.prose) {
    if (!std::regex_search(line.text, route_line))
      continue;
    text += line.text + "\n";
    has_step = has_step || std::regex_search(line.text, step_line);
  }
  if (!has_step)
    return std::nullopt;
  return text;
}

DocumentResult evaluate_document(const DocumentMeta &meta, std::string_view text,
                                 const EvaluationContext &ctx) {
  DocumentResult r;
  r.meta = meta;
  const auto doc = protocol::parse_document(text);
  const auto format = protocol::check_format(doc, ctx.profile);
  r.adherent = format.adherent;
  r.format_jsonl = protocol::to_jsonl(format, doc);

  for (const auto &smiles : protocol::extract_smiles(doc)) {
    ++r.smiles_total;
    const auto report = validity::validate(smiles);
    if (report.valid()) {
      ++r.smiles_valid;
      continue;
    }
    std::set<std::string> codes;
    for (const auto &e : report.errors)
      codes.insert(std::string(validity::to_string(e.code)));
    r.error_codes.insert(r.error_codes.end(), codes.begin(), codes.end());
  }

  const auto route_text = extract_route(doc);
  if (route_text || expects_route(meta.category)) {
    if (!route_text) {
      r.feasible = false;
      r.route_failures.push_back("no route");
    } else {
      if (ctx.catalog == nullptr)
        throw routes::CatalogMissing(
            "a starting-material catalog is required to assess routes");
      const auto &rules =
          ctx.rules != nullptr ? *ctx.rules : routes::builtin_rule_table();
      try {
        const auto route = routes::parse_route(*route_text);
        const auto report = routes::assess_feasibility(route, *ctx.catalog, rules);
        r.feasible = report.feasible;
        r.route_failures = report.failures();
      } catch (const routes::RouteError &e) {
        r.feasible = false;
        r.route_failures.push_back(std::string("route: ") + e.what());
      }
    }
  }
  return r;
}

std::string_view to_string(Metric m) {
  switch (m) {
  case Metric::kFormatAdherence: return "format_adherence";
  case Metric::kChemicalValidity: return "chemical_validity";
  case Metric::kSynthesisFeasibility: return "synthesis_feasibility";
  }
  return "";
}

stats::RateEstimate EvaluationReport::rate(const std::string &model,
                                           std::string_view category,
                                           Metric m) const {
  Tally t;
  if (auto it = rates.find(model); it != rates.end())
    if (auto jt = it->second.find(std::string(category)); jt != it->second.end())
      t = jt->second[static_cast<std::size_t>(m)];
  if (t.trials == 0)
    return stats::RateEstimate{0, 0, 0.0, 0.0, 1.0, confidence};
  return stats::wilson_from_counts(t.successes, t.trials, confidence);
}

stats::VerdictTable verdict_table(std::span<const DocumentResult> results,
                                  Metric m) {
  std::set<std::string> models, tasks;
  for (const auto &r : results) {
    models.insert(r.meta.model);
    tasks.insert(r.meta.task_id);
  }
  stats::VerdictTable t;
  t.models.assign(models.begin(), models.end());
  t.tasks.assign(tasks.begin(), tasks.end());
  t.verdicts.assign(t.models.size(),
                    std::vector<std::optional<bool>>(t.tasks.size()));
  for (const auto &r : results) {
    const auto mi = static_cast<std::size_t>(
        std::lower_bound(t.models.begin(), t.models.end(), r.meta.model) -
        t.models.begin());
    const auto ti = static_cast<std::size_t>(
        std::lower_bound(t.tasks.begin(), t.tasks.end(), r.meta.task_id) -
        t.tasks.begin());
    std::optional<bool> v;
    switch (m) {
    case Metric::kFormatAdherence: v = r.adherent; break;
    case Metric::kChemicalValidity: v = r.all_valid(); break;
    case Metric::kSynthesisFeasibility: v = r.feasible; break;
    }
    t.verdicts[mi][ti] = v;
  }
  return t;
}

EvaluationReport aggregate(std::span<const DocumentResult> results,
                           double confidence, double margin, double alpha) {
  EvaluationReport report;
  report.confidence = confidence;
  std::set<std::string> models;
  for (const auto &r : results) {
    models.insert(r.meta.model);
    for (const std::string &key :
         {std::string(curation::to_string(r.meta.category)), std::string(kOverall)}) {
      auto &cell = report.rates[r.meta.model][key];
      auto &fa = cell[static_cast<std::size_t>(Metric::kFormatAdherence)];
      ++fa.trials;
      fa.successes += r.adherent ? 1 : 0;
      auto &cv = cell[static_cast<std::size_t>(Metric::kChemicalValidity)];
      cv.trials += r.smiles_total;
      cv.successes += r.smiles_valid;
      if (r.feasible) {
        auto &sf = cell[static_cast<std::size_t>(Metric::kSynthesisFeasibility)];
        ++sf.trials;
        sf.successes += *r.feasible ? 1 : 0;
      }
    }
    auto &hist = report.taxonomy[r.meta.model];
    for (const auto &code : r.error_codes)
      ++hist[code];
  }
  report.models.assign(models.begin(), models.end());
  for (auto m : kAllMetrics)
    report.comparisons[static_cast<std::size_t>(m)] =
        stats::compare_models(verdict_table(results, m), margin, alpha, confidence);
  return report;
}

std::string comparison_jsonl(const stats::ComparisonResult &c,
                             std::string_view metric) {
  ordered_json j;
  j["record"] = "comparison";
  if (!metric.empty())
    j["metric"] = metric;
  j["model_a"] = c.model_a;
  j["model_b"] = c.model_b;
  j["paired_tasks"] = c.paired_tasks;
  j["rate_a"] = c.rate_a.point;
  j["rate_b"] = c.rate_b.point;
  j["only_a"] = c.only_a;
  j["only_b"] = c.only_b;
  j["mcnemar_statistic"] = c.mcnemar_statistic;
  j["mcnemar_p"] = c.mcnemar_p;
  j["adjusted_p"] = c.adjusted_p;
  j["cohens_h"] = c.cohens_h;
  j["tost_equivalent"] = c.tost.equivalent;
  j["tost_p_lower"] = c.tost.p_lower;
  j["tost_p_upper"] = c.tost.p_upper;
  return dump(j);
}

std::vector<std::string> report_jsonl(const EvaluationReport &report) {
  std::vector<std::string> out;
  for (const auto &[model, by_category] : report.rates) {
    for (const auto &[category, tallies] : by_category) {
      for (auto m : kAllMetrics) {
        const auto &t = tallies[static_cast<std::size_t>(m)];
        if (t.trials == 0)
          continue;
        const auto r = report.rate(model, category, m);
        ordered_json j;
        j["record"] = "rate";
        j["model"] = model;
        j["category"] = category;
        j["metric"] = to_string(m);
        j["successes"] = r.successes;
        j["trials"] = r.trials;
        j["rate"] = r.point;
        j["ci_low"] = r.ci_low;
        j["ci_high"] = r.ci_high;
        j["confidence"] = r.confidence_level;
        out.push_back(dump(j));
      }
    }
  }
  for (const auto &[model, hist] : report.taxonomy) {
    for (const auto &[code, count] : hist) {
      ordered_json j;
      j["record"] = "error_type";
      j["model"] = model;
      j["code"] = code;
      j["count"] = count;
      out.push_back(dump(j));
    }
  }
  for (auto m : kAllMetrics)
    for (const auto &c : report.comparisons[static_cast<std::size_t>(m)])
      out.push_back(comparison_jsonl(c, to_string(m)));
  return out;
}

std::string render_comparisons(std::span<const stats::ComparisonResult> cs) {
  std::ostringstream out;
  char buf[256];
  for (const auto &c : cs) {
    std::snprintf(buf, sizeof buf,
                  "  %s vs %s: n=%ld  b=%ld c=%ld  chi2=%.3f  p=%.4g  "
                  "p_adj=%.4g  h=%.3f  TOST %s\n",
                  c.model_a.c_str(), c.model_b.c_str(), c.paired_tasks,
                  c.only_a, c.only_b, c.mcnemar_statistic, c.mcnemar_p,
                  c.adjusted_p, c.cohens_h,
                  c.tost.equivalent ? "equivalent" : "not equivalent");
    out << buf;
  }
  return out.str();
}

std::string render_report(const EvaluationReport &report) {
  std::ostringstream out;
  std::vector<std::string> columns;
  for (auto c : curation::kAllCategories)
    columns.emplace_back(curation::to_string(c));
  columns.emplace_back(kOverall);

  for (auto m : kAllMetrics) {
    out << to_string(m) << '\n';
    std::vector<std::string> shown;
    for (const auto &col : columns) {
      for (const auto &model : report.models) {
        if (report.rate(model, col, m).trials > 0) {
          shown.push_back(col);
          break;
        }
      }
    }
    out << pad("model", 24);
    for (const auto &col : shown)
      out << pad(col, 24);
    out << '\n';
    for (const auto &model : report.models) {
      out << pad(model, 24);
      for (const auto &col : shown)
        out << pad(percent(report.rate(model, col, m)), 24);
      out << '\n';
    }
    out << '\n';
  }

  out << "error types (structures carrying each code)\n";
  for (const auto &[model, hist] : report.taxonomy) {
    out << "  " << model << ':';
    if (hist.empty())
      out << " none";
    for (const auto &[code, count] : hist)
      out << ' ' << code << '=' << count;
    out << '\n';
  }

  for (auto m : kAllMetrics) {
    const auto &cs = report.comparisons[static_cast<std::size_t>(m)];
    if (cs.empty())
      continue;
    out << "\ncomparisons: " << to_string(m) << '\n' << render_comparisons(cs);
  }
  return out.str();
}

}  // namespace chemeval::cli
