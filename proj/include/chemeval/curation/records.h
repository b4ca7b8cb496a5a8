//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_CURATION_RECORDS_H_
#define CHEMEVAL_CURATION_RECORDS_H_

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chemeval::curation {

enum class TaskCategory {
  kPropertyPrediction,
  kStructureOptimization,
  kSimilarityDesign,
  kScaffoldHopping,
  kForwardSynthesis,
  kRetrosynthesis,
  kReactionPrediction,
  kMechanismElucidation,
};

inline constexpr std::array kAllCategories{
    TaskCategory::kPropertyPrediction,  TaskCategory::kStructureOptimization,
    TaskCategory::kSimilarityDesign,    TaskCategory::kScaffoldHopping,
    TaskCategory::kForwardSynthesis,    TaskCategory::kRetrosynthesis,
    TaskCategory::kReactionPrediction,  TaskCategory::kMechanismElucidation,
};

std::string_view to_string(TaskCategory c);
std::optional<TaskCategory> category_from_string(std::string_view name);

class RecordError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DatasetRecord {
  std::string id;
  TaskCategory task_category = TaskCategory::kPropertyPrediction;
  std::string instruction;
  std::string input;
  std::string output;
  /// SMILES; canonical once the record has been standardized.
  std::vector<std::string> key_molecules;
  std::optional<std::string> key_product;
  /// Reaction SMILES, for records that describe a transformation.
  std::optional<std::string> reaction;
  std::map<std::string, double> properties;

  bool operator==(const DatasetRecord &) const = default;
};

/// One JSON object per line. Required: id, task_category, instruction.
/// Optional: input, output, molecules (array), product, reaction,
/// properties (object of numbers).
DatasetRecord parse_record(std::string_view json_line);
std::string to_jsonl(const DatasetRecord &r);

struct ReadResult {
  std::vector<DatasetRecord> records;
  /// "line N: reason" for every line that could not be parsed.
  std::vector<std::string> errors;
};

ReadResult read_records(std::istream &in);

struct InstructionRecord {
  std::string instruction;
  std::string input;
  std::string output;

  bool operator==(const InstructionRecord &) const = default;
};

/// {"instruction", "input", "output"} in that order, one line.
std::string emit_instruction_record(const DatasetRecord &r);
std::string emit_instruction_record(const InstructionRecord &r);
InstructionRecord parse_instruction_record(std::string_view json_line);

struct StandardizeOutcome {
  DatasetRecord record;
  /// Molecules that failed to parse or standardize, with the reason.
  std::vector<std::string> failures;
};

/// Canonicalizes key molecules and product through standardize().
StandardizeOutcome standardize_record(const DatasetRecord &r);

/// Category, sorted canonical molecule set and whitespace-collapsed
/// instruction.
std::string dedup_key(const DatasetRecord &r);

struct DedupResult {
  std::vector<DatasetRecord> kept;
  std::size_t removed = 0;
  /// Index of each removed record in the input.
  std::vector<std::size_t> removed_indices;
};

DedupResult deduplicate(const std::vector<DatasetRecord> &records);

}  // namespace chemeval::curation

#endif  // CHEMEVAL_CURATION_RECORDS_H_
