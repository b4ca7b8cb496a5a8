//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/curation/records.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "chemeval/curation/standardize.h"
#include "chemeval/mol/smiles.h"

namespace chemeval::curation {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, kAllCategories.size()> kCategoryNames{
    "property_prediction", "structure_optimization", "similarity_design",
    "scaffold_hopping",    "forward_synthesis",      "retrosynthesis",
    "reaction_prediction", "mechanism_elucidation",
};

std::string dump(const ordered_json &j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string text_field(const json &j, const char *name, bool required) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) {
    if (required)
      throw RecordError(std::string("missing field '") + name + "'");
    return {};
  }
  if (!it->is_string())
    throw RecordError(std::string("field '") + name + "' must be a string");
  return it->get<std::string>();
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool gap = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      gap = !out.empty();
      continue;
    }
    if (gap)
      out += ' ';
    gap = false;
    out += c;
  }
  return out;
}

}  // namespace

std::string_view to_string(TaskCategory c) {
  return kCategoryNames[static_cast<std::size_t>(c)];
}

std::optional<TaskCategory> category_from_string(std::string_view name) {
  for (std::size_t k = 0; k < kCategoryNames.size(); ++k)
    if (kCategoryNames[k] == name)
      return kAllCategories[k];
  return std::nullopt;
}

DatasetRecord parse_record(std::string_view json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error &e) {
    throw RecordError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object())
    throw RecordError("record is not a JSON object");

  DatasetRecord r;
  if (auto it = j.find("id"); it != j.end() && it->is_number_integer())
    r.id = std::to_string(it->get<long long>());
  else
    r.id = text_field(j, "id", true);
  const std::string category = text_field(j, "task_category", true);
  const auto cat = category_from_string(category);
  if (!cat)
    throw RecordError("unknown task_category '" + category + "'");
  r.task_category = *cat;
  r.instruction = text_field(j, "instruction", true);
  if (collapse_whitespace(r.instruction).empty())
    throw RecordError("empty instruction");
  r.input = text_field(j, "input", false);
  r.output = text_field(j, "output", false);

  if (auto it = j.find("molecules"); it != j.end() && !it->is_null()) {
    if (!it->is_array())
      throw RecordError("field 'molecules' must be an array");
    for (const auto &m : *it) {
      if (!m.is_string())
        throw RecordError("molecules entries must be strings");
      r.key_molecules.push_back(m.get<std::string>());
    }
  }
  if (auto p = text_field(j, "product", false); !p.empty())
    r.key_product = p;
  if (auto p = text_field(j, "reaction", false); !p.empty())
    r.reaction = p;
  if (auto it = j.find("properties"); it != j.end() && !it->is_null()) {
    if (!it->is_object())
      throw RecordError("field 'properties' must be an object");
    for (const auto &[name, value] : it->items()) {
      if (!value.is_number())
        throw RecordError("property '" + name + "' is not a number");
      r.properties[name] = value.get<double>();
    }
  }
  return r;
}

std::string to_jsonl(const DatasetRecord &r) {
  ordered_json j;
  j["id"] = r.id;
  j["task_category"] = to_string(r.task_category);
  j["instruction"] = r.instruction;
  j["input"] = r.input;
  j["output"] = r.output;
  j["molecules"] = r.key_molecules;
  if (r.key_product)
    j["product"] = *r.key_product;
  if (r.reaction)
    j["reaction"] = *r.reaction;
  if (!r.properties.empty()) {
    ordered_json props = ordered_json::object();
    for (const auto &[k, v] : r.properties)
      props[k] = v;
    j["properties"] = std::move(props);
  }
  return dump(j);
}

ReadResult read_records(std::istream &in) {
  ReadResult out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    try {
      out.records.push_back(parse_record(line));
    } catch (const RecordError &e) {
      out.errors.push_back("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

std::string emit_instruction_record(const InstructionRecord &r) {
  ordered_json j;
  j["instruction"] = r.instruction;
  j["input"] = r.input;
  j["output"] = r.output;
  return dump(j);
}

std::string emit_instruction_record(const DatasetRecord &r) {
  return emit_instruction_record(InstructionRecord{r.instruction, r.input, r.output});
}

InstructionRecord parse_instruction_record(std::string_view json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error &e) {
    throw RecordError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || j.size() != 3)
    throw RecordError("instruction record must have exactly three fields");
  return {text_field(j, "instruction", true), text_field(j, "input", true),
          text_field(j, "output", true)};
}

StandardizeOutcome standardize_record(const DatasetRecord &r) {
  StandardizeOutcome out{r, {}};
  auto fix = [&](std::string &smiles) {
    try {
      smiles = standardize_smiles(smiles);
    } catch (const std::exception &e) {
      out.failures.push_back(smiles + ": " + e.what());
    }
  };
  for (auto &m : out.record.key_molecules)
    fix(m);
  if (out.record.key_product)
    fix(*out.record.key_product);
  return out;
}

std::string dedup_key(const DatasetRecord &r) {
  std::set<std::string> molecules;
  auto add = [&](const std::string &smiles) {
    try {
      molecules.insert(mol::canonical_smiles(smiles));
    } catch (const std::exception &) {
      molecules.insert(smiles);
    }
  };
  for (const auto &m : r.key_molecules)
    add(m);
  if (r.key_product)
    add(*r.key_product);
  std::string key(to_string(r.task_category));
  key += '\x1f';
  for (const auto &m : molecules)
    key += m + '\x1e';
  key += '\x1f';
  key += collapse_whitespace(r.instruction);
  return key;
}

DedupResult deduplicate(const std::vector<DatasetRecord> &records) {
  DedupResult out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (seen.insert(dedup_key(records[i])).second) {
      out.kept.push_back(records[i]);
    } else {
      ++out.removed;
      out.removed_indices.push_back(i);
    }
  }
  return out;
}

}  // namespace chemeval::curation
