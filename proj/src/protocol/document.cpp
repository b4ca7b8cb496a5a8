//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/protocol/document.h"

#include <algorithm>
#include <cctype>
#include <regex>

namespace chemeval::protocol {

bool TableBlock::aligned() const {
  return std::adjacent_find(row_columns.begin(), row_columns.end(),
                            std::not_equal_to<>()) == row_columns.end();
}

std::string_view to_string(DefectKind kind) {
  switch (kind) {
  case DefectKind::kUnterminatedFence: return "unterminated_fence";
  case DefectKind::kUnterminatedThink: return "unterminated_think";
  case DefectKind::kThinkNotFirst: return "think_not_first";
  case DefectKind::kRepeatedThink: return "repeated_think";
  case DefectKind::kMalformedHeader: return "malformed_header";
  }
  return "";
}

bool StructuredDoc::has_defect(DefectKind kind) const {
  return std::any_of(defects.begin(), defects.end(),
                     [&](const Defect &d) { return d.kind == kind; });
}

std::string strip_inline_code(std::string_view text) {
  std::string out(text);
  std::size_t i = 0;
  while (i < out.size()) {
    if (out[i] != '`') {
      ++i;
      continue;
    }
    std::size_t run = 0;
    while (i + run < out.size() && out[i + run] == '`')
      ++run;
    const std::string fence(run, '`');
    const auto close = out.find(fence, i + run);
    if (close == std::string::npos) {
      i += run;
      continue;
    }
    std::fill(out.begin() + static_cast<long>(i),
              out.begin() + static_cast<long>(close + run), ' ');
    i = close + run;
  }
  return out;
}

namespace {

struct Line {
  std::string_view text;
  std::size_t offset;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void split_lines(std::string_view text, std::size_t base,
                 std::vector<Line> &out) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    out.push_back({line, base + pos});
    pos = nl + 1;
  }
}

int count_cells(std::string_view row) {
  std::string s = strip_inline_code(trim(row));
  if (!s.empty() && s.front() == '|')
    s.erase(0, 1);
  if (!s.empty() && s.back() == '|' && (s.size() < 2 || s[s.size() - 2] != '\\'))
    s.pop_back();
  int cells = 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
      continue;
    }
    if (s[i] == '|')
      ++cells;
  }
  return cells;
}

class DocParser {
public:
  explicit DocParser(std::string_view text) : text_(text) { }

  StructuredDoc run() {
    std::vector<Line> lines;
    extract_think(lines);
    for (const auto &line : lines)
      consume(line);
    finish();
    return std::move(doc_);
  }

private:
  void defect(DefectKind kind, Span span, std::string detail) {
    doc_.defects.push_back({kind, span, std::move(detail)});
  }

  void extract_think(std::vector<Line> &lines) {
    static constexpr std::string_view kOpen = "<think>";
    static constexpr std::string_view kClose = "</think>";
    const auto open = text_.find(kOpen);
    if (open == std::string_view::npos) {
      if (auto stray = text_.find(kClose); stray != std::string_view::npos)
        defect(DefectKind::kThinkNotFirst, {stray, stray + kClose.size()},
               "closing </think> without an opening tag");
      split_lines(text_, 0, lines);
      return;
    }
    if (!trim(text_.substr(0, open)).empty())
      defect(DefectKind::kThinkNotFirst, {open, open + kOpen.size()},
             "<think> block does not open the document");
    const auto body_begin = open + kOpen.size();
    const auto close = text_.find(kClose, body_begin);
    split_lines(text_.substr(0, open), 0, lines);
    if (close == std::string_view::npos) {
      doc_.think = ThinkBlock{std::string(text_.substr(body_begin)),
                              {open, text_.size()}};
      defect(DefectKind::kUnterminatedThink, {open, text_.size()},
             "<think> block is never closed");
      return;
    }
    doc_.think = ThinkBlock{
        std::string(text_.substr(body_begin, close - body_begin)),
        {open, close + kClose.size()}};
    const auto rest = close + kClose.size();
    if (auto again = text_.find(kOpen, rest); again != std::string_view::npos)
      defect(DefectKind::kRepeatedThink, {again, again + kOpen.size()},
             "second <think> block");
    split_lines(text_.substr(rest), rest, lines);
  }

  void consume(const Line &line) {
    const Span span{line.offset, line.offset + line.text.size()};
    const std::string s(line.text);
    std::smatch m;

    if (fence_) {
      if (closes_fence(s)) {
        fence_->span.end = span.end;
        doc_.code_blocks.push_back(std::move(*fence_));
        fence_.reset();
      } else {
        if (!fence_->content.empty() || fence_lines_ > 0)
          fence_->content += '\n';
        fence_->content += s;
        ++fence_lines_;
      }
      append_body(s);
      return;
    }

    static const std::regex fence_re(R"(^ {0,3}(`{3,}|~{3,})\s*([^`\s]*).*$)");
    if (std::regex_match(s, m, fence_re)) {
      close_list();
      close_table();
      fence_ = CodeBlock{};
      std::string lang = m[2].str();
      std::transform(lang.begin(), lang.end(), lang.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      fence_->language = lang;
      fence_->span = span;
      fence_marker_ = m[1].str();
      fence_lines_ = 0;
      append_body(s);
      return;
    }

    doc_.prose.push_back({s, span});

    static const std::regex header_re(R"(^ {0,3}(#{1,6})[ \t]+(.*?)[ \t#]*$)");
    static const std::regex bad_header_re(
        R"(^ {0,3}(#{7,}.*|#{1,6}[A-Za-z].*|#{1,6}[ \t]*)$)");
    if (std::regex_match(s, m, header_re) && !trim(m[2].str()).empty()) {
      close_list();
      close_table();
      close_section(span.begin);
      Section sec;
      sec.level = static_cast<int>(m[1].length());
      sec.title = trim(m[2].str());
      sec.span = span;
      section_ = std::move(sec);
      return;
    }
    if (std::regex_match(s, bad_header_re)) {
      close_list();
      close_table();
      defect(DefectKind::kMalformedHeader, span, trim(s));
      append_body(s);
      return;
    }

    append_body(s);
    const std::string t = trim(s);
    if (t.empty()) {
      close_table();
      blank_ = true;
      return;
    }

    static const std::regex rule_re(R"(^\s*([-*_])(\s*\1){2,}\s*$)");
    if (std::regex_match(s, rule_re)) {
      close_list();
      close_table();
      blank_ = false;
      return;
    }

    if (t.front() == '|') {
      close_list();
      if (!table_)
        table_ = TableBlock{{}, span};
      table_->row_columns.push_back(count_cells(t));
      table_->span.end = span.end;
      blank_ = false;
      return;
    }
    close_table();

    static const std::regex item_re(
        "^([ \\t]*)([-*+]|\xE2\x80\xA2|\\d{1,9}[.)])[ \\t]+(.*)$");
    if (std::regex_match(s, m, item_re)) {
      if (!list_)
        list_ = ListBlock{{}, span};
      ListItem item;
      item.indent = static_cast<int>(m[1].length());
      item.style = std::isdigit(static_cast<unsigned char>(m[2].str()[0]))
                       ? ListStyle::kNumbered
                       : ListStyle::kBullet;
      item.text = m[3].str();
      list_->items.push_back(std::move(item));
      list_->span.end = span.end;
      blank_ = false;
      return;
    }
    // Indented text directly under an item continues it.
    const bool indented = s.size() >= 2 && (s[0] == ' ' || s[0] == '\t');
    if (list_ && indented && !blank_) {
      list_->span.end = span.end;
      return;
    }
    close_list();
    blank_ = false;
  }

  bool closes_fence(const std::string &s) const {
    const std::string t = trim(s);
    if (t.size() < fence_marker_.size())
      return false;
    return std::all_of(t.begin(), t.end(),
                       [&](char c) { return c == fence_marker_[0]; });
  }

  void append_body(const std::string &s) {
    if (!section_)
      return;
    if (!section_->body.empty() || section_has_line_)
      section_->body += '\n';
    section_->body += s;
    section_has_line_ = true;
  }

  void close_section(std::size_t end) {
    if (!section_)
      return;
    section_->span.end = end;
    doc_.sections.push_back(std::move(*section_));
    section_.reset();
    section_has_line_ = false;
  }

  void close_list() {
    if (list_)
      doc_.lists.push_back(std::move(*list_));
    list_.reset();
    blank_ = false;
  }

  void close_table() {
    if (table_)
      doc_.tables.push_back(std::move(*table_));
    table_.reset();
  }

  void finish() {
    if (fence_) {
      defect(DefectKind::kUnterminatedFence, {fence_->span.begin, text_.size()},
             "fence opened with " + fence_marker_ +
                 (fence_->language.empty() ? "" : fence_->language) +
                 " is never closed");
      fence_.reset();
    }
    close_list();
    close_table();
    close_section(text_.size());
  }

  std::string_view text_;
  StructuredDoc doc_;
  std::optional<CodeBlock> fence_;
  std::string fence_marker_;
  int fence_lines_ = 0;
  std::optional<Section> section_;
  bool section_has_line_ = false;
  std::optional<ListBlock> list_;
  std::optional<TableBlock> table_;
  bool blank_ = false;
};

}  // namespace

StructuredDoc parse_document(std::string_view text) {
  return DocParser(text).run();
}

std::vector<std::string> extract_smiles(const StructuredDoc &doc) {
  std::vector<std::string> out;
  for (const auto &block : doc.code_blocks) {
    if (block.language != "smiles")
      continue;
    std::size_t pos = 0;
    const std::string &c = block.content;
    while (pos <= c.size()) {
      auto nl = c.find('\n', pos);
      if (nl == std::string::npos)
        nl = c.size();
      std::string line = trim(std::string_view(c).substr(pos, nl - pos));
      if (!line.empty())
        out.push_back(std::move(line));
      pos = nl + 1;
    }
  }
  return out;
}

}  // namespace chemeval::protocol
