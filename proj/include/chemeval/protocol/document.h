//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_PROTOCOL_DOCUMENT_H_
#define CHEMEVAL_PROTOCOL_DOCUMENT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chemeval::protocol {

/// Byte range [begin, end) in the original text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct ThinkBlock {
  std::string text;
  Span span;
};

struct Section {
  int level = 0;
  std::string title;
  std::string body;
  Span span;
};

struct CodeBlock {
  /// Lowercased info-string word; empty for untagged fences.
  std::string language;
  std::string content;
  Span span;
};

enum class ListStyle { kBullet, kNumbered };

struct ListItem {
  int indent = 0;
  ListStyle style = ListStyle::kBullet;
  std::string text;
};

struct ListBlock {
  std::vector<ListItem> items;
  Span span;
};

struct TableBlock {
  /// Cell count of every row, header first.
  std::vector<int> row_columns;
  Span span;

  int column_count() const { return row_columns.empty() ? 0 : row_columns[0]; }
  int row_count() const { return static_cast<int>(row_columns.size()); }
  bool aligned() const;
};

enum class DefectKind {
  kUnterminatedFence,
  kUnterminatedThink,
  kThinkNotFirst,
  kRepeatedThink,
  kMalformedHeader,
};

std::string_view to_string(DefectKind kind);

struct Defect {
  DefectKind kind;
  Span span;
  std::string detail;
};

/// A line outside the think block and outside fenced code.
struct ProseLine {
  std::string text;
  Span span;
};

struct StructuredDoc {
  std::optional<ThinkBlock> think;
  std::vector<Section> sections;
  std::vector<CodeBlock> code_blocks;
  std::vector<ListBlock> lists;
  std::vector<TableBlock> tables;
  std::vector<ProseLine> prose;
  std::vector<Defect> defects;

  bool has_defect(DefectKind kind) const;
};

/// Never throws on any input. Fences run to the end of the text when they
/// are not closed (recorded as a defect, the block itself is dropped).
StructuredDoc parse_document(std::string_view text);

/// Lines of smiles-tagged fences, trimmed, empty lines skipped.
std::vector<std::string> extract_smiles(const StructuredDoc &doc);

/// `text` with `...` spans blanked out.
std::string strip_inline_code(std::string_view text);

}  // namespace chemeval::protocol

#endif  // CHEMEVAL_PROTOCOL_DOCUMENT_H_
