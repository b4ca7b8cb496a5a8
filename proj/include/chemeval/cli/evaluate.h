//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_CLI_EVALUATE_H_
#define CHEMEVAL_CLI_EVALUATE_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chemeval/curation/records.h"
#include "chemeval/protocol/format_check.h"
#include "chemeval/routes/feasibility.h"
#include "chemeval/stats/proportions.h"

namespace chemeval::cli {

class MetadataMissing : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One line of <outputs>/manifest.jsonl.
struct DocumentMeta {
  std::string file;
  std::string model;
  std::string task_id;
  curation::TaskCategory category = curation::TaskCategory::kPropertyPrediction;
  std::optional<std::string> difficulty;
};

std::vector<DocumentMeta> read_manifest(const std::filesystem::path &outputs_dir);

/// Forward synthesis and retrosynthesis outputs must carry a route.
bool expects_route(curation::TaskCategory c);

/// Route text: the first fence tagged "route", else the TARGET / STARTING
/// MATERIALS / STEP lines of the prose.
std::optional<std::string> extract_route(const protocol::StructuredDoc &doc);

struct EvaluationContext {
  protocol::Profile profile = protocol::Profile::default_template();
  const routes::Catalog *catalog = nullptr;
  const routes::RuleTable *rules = nullptr;
};

struct DocumentResult {
  DocumentMeta meta;
  bool adherent = false;
  long smiles_total = 0;
  long smiles_valid = 0;
  /// Set when the document has a route or its task expects one.
  std::optional<bool> feasible;
  /// Error codes per invalid structure, each code once per structure.
  std::vector<std::string> error_codes;
  std::vector<std::string> route_failures;
  std::string format_jsonl;

  /// All extracted structures valid; unset when none were extracted.
  std::optional<bool> all_valid() const {
    if (smiles_total == 0)
      return std::nullopt;
    return smiles_valid == smiles_total;
  }
};

/// Throws routes::CatalogMissing when a route must be assessed and no
/// catalog was supplied.
DocumentResult evaluate_document(const DocumentMeta &meta, std::string_view text,
                                 const EvaluationContext &ctx);

enum class Metric { kFormatAdherence, kChemicalValidity, kSynthesisFeasibility };

inline constexpr std::array kAllMetrics{Metric::kFormatAdherence,
                                        Metric::kChemicalValidity,
                                        Metric::kSynthesisFeasibility};

std::string_view to_string(Metric m);

struct Tally {
  long successes = 0;
  long trials = 0;
};

inline constexpr std::string_view kOverall = "overall";

struct EvaluationReport {
  double confidence = 0.95;
  std::vector<std::string> models;
  /// model -> category (or "overall") -> metric tallies. Chemical validity
  /// counts structures; the other two count documents.
  std::map<std::string, std::map<std::string, std::array<Tally, 3>>> rates;
  /// model -> error code -> structures carrying it.
  std::map<std::string, std::map<std::string, long>> taxonomy;
  /// Per metric: pairwise comparisons on shared tasks, using per-document
  /// verdicts (all structures valid, for chemical validity).
  std::array<std::vector<stats::ComparisonResult>, 3> comparisons;

  stats::RateEstimate rate(const std::string &model, std::string_view category,
                           Metric m) const;
};

/// Per-document binary verdicts for one metric; tasks sorted.
stats::VerdictTable verdict_table(std::span<const DocumentResult> results,
                                  Metric m);

EvaluationReport aggregate(std::span<const DocumentResult> results,
                           double confidence = 0.95, double margin = 0.05,
                           double alpha = 0.05);

/// One record per (model, category, metric), per taxonomy entry and per
/// comparison.
std::vector<std::string> report_jsonl(const EvaluationReport &report);

/// Plain-text tables: rates per model and category as "96.3% (±1.7%)",
/// the error taxonomy, and the comparisons.
std::string render_report(const EvaluationReport &report);

std::string comparison_jsonl(const stats::ComparisonResult &c,
                             std::string_view metric);
std::string render_comparisons(std::span<const stats::ComparisonResult> cs);

}  // namespace chemeval::cli

#endif  // CHEMEVAL_CLI_EVALUATE_H_
