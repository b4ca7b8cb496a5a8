//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/protocol/format_check.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>

#include <json.hpp>

#include "chemeval/mol/smiles.h"

namespace chemeval::protocol {

std::string_view to_string(Requirement r) {
  switch (r) {
  case Requirement::kSectionHeaders: return "section_headers";
  case Requirement::kSmilesCodeBlocks: return "smiles_code_blocks";
  case Requirement::kMarkdownFormatting: return "markdown_formatting";
  case Requirement::kBulletedLists: return "bulleted_lists";
  case Requirement::kTabularData: return "tabular_data";
  case Requirement::kJsonStructures: return "json_structures";
  case Requirement::kChemicalEquations: return "chemical_equations";
  }
  return "";
}

std::optional<Requirement> requirement_from_string(std::string_view name) {
  for (auto r : kAllRequirements)
    if (to_string(r) == name)
      return r;
  return std::nullopt;
}

std::string_view to_string(Verdict v) {
  switch (v) {
  case Verdict::kPass: return "pass";
  case Verdict::kFail: return "fail";
  case Verdict::kNotApplicable: return "not_applicable";
  }
  return "";
}

Profile Profile::default_template() {
  Profile p;
  p.set_mandatory(Requirement::kSectionHeaders, true);
  p.set_mandatory(Requirement::kSmilesCodeBlocks, true);
  return p;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> lines_of(const std::string &s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto nl = s.find('\n', pos);
    if (nl == std::string::npos)
      nl = s.size();
    out.push_back(s.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

struct Judgement {
  bool present = false;
  bool pass = true;
  std::string reason;

  void fail(std::string why) {
    if (pass)
      reason = std::move(why);
    pass = false;
  }
};

Judgement judge_headers(const StructuredDoc &doc, bool mandatory) {
  Judgement j;
  j.present = !doc.sections.empty() ||
              doc.has_defect(DefectKind::kMalformedHeader) ||
              doc.has_defect(DefectKind::kThinkNotFirst) ||
              doc.has_defect(DefectKind::kUnterminatedThink);
  for (const auto &d : doc.defects) {
    switch (d.kind) {
    case DefectKind::kMalformedHeader:
      j.fail("malformed header: " + d.detail);
      break;
    case DefectKind::kThinkNotFirst:
    case DefectKind::kUnterminatedThink:
    case DefectKind::kRepeatedThink: j.fail(d.detail); break;
    default: break;
    }
  }
  if (!mandatory)
    return j;
  if (!doc.think)
    j.fail("no <think> block");
  const bool has_h2 =
      std::any_of(doc.sections.begin(), doc.sections.end(),
                  [](const Section &s) { return s.level == 2; });
  if (!has_h2)
    j.fail("no '##' header");
  if (doc.sections.empty()) {
    j.fail("no final '## Summary' section");
  } else {
    const auto &last = doc.sections.back();
    std::string title = lower(last.title);
    while (!title.empty() && (title.back() == ':' || title.back() == '.'))
      title.pop_back();
    if (last.level != 2 || title != "summary")
      j.fail("last section is '" + last.title + "', not '## Summary'");
  }
  return j;
}

bool all_lines_parse_as_smiles(const std::string &content) {
  int parsed = 0;
  for (const auto &line : lines_of(content)) {
    const std::string t = trim(line);
    if (t.empty())
      continue;
    try {
      mol::parse_smiles(t);
      ++parsed;
    } catch (const std::exception &) {
      return false;
    }
  }
  return parsed > 0;
}

Judgement judge_smiles(const StructuredDoc &doc, bool mandatory) {
  Judgement j;
  j.present = !doc.code_blocks.empty() ||
              doc.has_defect(DefectKind::kUnterminatedFence);
  for (const auto &d : doc.defects)
    if (d.kind == DefectKind::kUnterminatedFence)
      j.fail(d.detail);
  bool tagged = false;
  for (const auto &b : doc.code_blocks) {
    if (b.language == "smiles") {
      tagged = true;
      continue;
    }
    if (all_lines_parse_as_smiles(b.content))
      j.fail("SMILES inside a fence tagged '" + b.language + "'");
  }
  if (mandatory && !tagged)
    j.fail("no fence tagged smiles");
  return j;
}

bool is_word(unsigned char c) { return std::isalnum(c) != 0; }

struct EmphasisCount {
  int runs = 0;
  int chars = 0;
  bool balanced() const { return runs % 2 == 0 && chars % 2 == 0; }
};

/// Emphasis delimiter runs on one line, skipping runs that cannot open or
/// close emphasis.
void count_emphasis(const std::string &raw, EmphasisCount &stars,
                    EmphasisCount &underscores) {
  static const std::regex bullet(R"(^\s*\*\s+)");
  std::string s = strip_inline_code(raw);
  s = std::regex_replace(s, bullet, " ");
  stars = underscores = {};
  for (std::size_t i = 0; i < s.size();) {
    const char c = s[i];
    if (c != '*' && c != '_') {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < s.size() && s[end] == c)
      ++end;
    const unsigned char prev = i > 0 ? s[i - 1] : ' ';
    const unsigned char next = end < s.size() ? s[end] : ' ';
    EmphasisCount *target = nullptr;
    if (c == '*') {
      const bool arithmetic = (prev == ' ' && next == ' ') ||
                              (std::isdigit(prev) && std::isdigit(next)) ||
                              prev == '[' || next == ']';
      if (!arithmetic)
        target = &stars;
    } else if (!(is_word(prev) && is_word(next))) {
      target = &underscores;
    }
    if (target) {
      ++target->runs;
      target->chars += static_cast<int>(end - i);
    }
    i = end;
  }
}

Judgement judge_markdown(const StructuredDoc &doc) {
  Judgement j;
  for (const auto &line : doc.prose) {
    EmphasisCount stars, underscores;
    count_emphasis(line.text, stars, underscores);
    if (stars.runs == 0 && underscores.runs == 0)
      continue;
    j.present = true;
    if (!stars.balanced() || !underscores.balanced())
      j.fail("unbalanced emphasis: " + trim(line.text));
  }
  return j;
}

Judgement judge_lists(const StructuredDoc &doc) {
  Judgement j;
  j.present = !doc.lists.empty();
  for (const auto &list : doc.lists) {
    std::map<int, ListStyle> style_at;
    for (const auto &item : list.items) {
      auto [it, inserted] = style_at.emplace(item.indent, item.style);
      if (!inserted && it->second != item.style) {
        j.fail("list mixes numbered and bulleted items near '" +
               trim(item.text) + "'");
        break;
      }
    }
  }
  return j;
}

Judgement judge_tables(const StructuredDoc &doc) {
  Judgement j;
  j.present = !doc.tables.empty();
  for (const auto &t : doc.tables) {
    if (!t.aligned()) {
      std::string counts;
      for (int c : t.row_columns)
        counts += (counts.empty() ? "" : ",") + std::to_string(c);
      j.fail("table rows have differing column counts (" + counts + ")");
    }
  }
  return j;
}

/// Bracket balance, ignoring string contents. Returns true when balanced.
struct BalanceState {
  std::string stack;
  bool in_string = false;
  bool escaped = false;
  bool broken = false;

  void feed(std::string_view s) {
    for (char c : s) {
      if (broken)
        return;
      if (in_string) {
        if (escaped)
          escaped = false;
        else if (c == '\\')
          escaped = true;
        else if (c == '"')
          in_string = false;
        continue;
      }
      switch (c) {
      case '"': in_string = true; break;
      case '{':
      case '[': stack.push_back(c); break;
      case '}':
      case ']':
        if (stack.empty() || stack.back() != (c == '}' ? '{' : '['))
          broken = true;
        else
          stack.pop_back();
        break;
      default: break;
      }
    }
  }
  bool balanced() const { return !broken && stack.empty() && !in_string; }
};

Judgement judge_json(const StructuredDoc &doc) {
  Judgement j;
  for (const auto &b : doc.code_blocks) {
    const bool json_tag = b.language == "json" || b.language == "jsonl";
    const bool brace_led = b.language.empty() && !trim(b.content).empty() &&
                           trim(b.content).front() == '{';
    if (!json_tag && !brace_led)
      continue;
    j.present = true;
    if (b.language == "jsonl") {
      for (const auto &line : lines_of(b.content)) {
        BalanceState st;
        st.feed(line);
        if (!st.balanced())
          j.fail("unbalanced brackets in JSON line");
      }
      continue;
    }
    BalanceState st;
    st.feed(b.content);
    if (!st.balanced())
      j.fail("unbalanced brackets in JSON block");
  }

  // Brace-led blocks in running text, ended by a blank line.
  std::optional<BalanceState> open;
  for (const auto &line : doc.prose) {
    const std::string t = trim(strip_inline_code(line.text));
    if (!open) {
      if (t.empty() || t.front() != '{')
        continue;
      j.present = true;
      open = BalanceState{};
    }
    if (t.empty()) {
      if (!open->balanced())
        j.fail("unbalanced brackets in JSON block");
      open.reset();
      continue;
    }
    open->feed(t);
    if (open->broken || open->stack.empty()) {
      if (!open->balanced())
        j.fail("unbalanced brackets in JSON block");
      open.reset();
    }
  }
  if (open && !open->balanced())
    j.fail("unbalanced brackets in JSON block");
  return j;
}

Judgement judge_arrows(const StructuredDoc &doc) {
  static const std::regex arrow(
      "(?:[-=]+>|(?:\xE2\x80\x94)+>|(?:\xE2\x80\x93)+>|\xE2\x86\x92|"
      "\xE2\x9F\xB6|\xE2\x87\x92|\xE2\x9F\xB9|\xE2\x87\x8C|\xE2\x87\x84|"
      "\xE2\x9F\xB7|\xE2\x86\x94)");
  static const std::regex item_prefix(R"(^\s*(?:[-*+]|\d{1,9}[.)])\s+)");
  Judgement j;
  for (const auto &line : doc.prose) {
    const std::string s = strip_inline_code(line.text);
    for (std::sregex_iterator it(s.begin(), s.end(), arrow), end; it != end;
         ++it) {
      j.present = true;
      const auto &m = *it;
      const std::string token = m.str();
      const std::string left = trim(std::regex_replace(
          s.substr(0, static_cast<std::size_t>(m.position())), item_prefix, ""));
      const std::string right =
          trim(s.substr(static_cast<std::size_t>(m.position() + m.length())));
      if (token != "->" && token != "\xE2\x86\x92")
        j.fail("arrow '" + token + "' is not '->' or '\xE2\x86\x92'");
      else if (left.empty() || right.empty())
        j.fail("arrow with an empty side: " + trim(line.text));
    }
  }
  return j;
}

}  // namespace

Profile Profile::parse(std::istream &in) {
  Profile p;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string t = trim(line);
    if (t.empty())
      continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ProfileError("profile line " + std::to_string(number) +
                         ": expected '<requirement> = mandatory|optional'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = lower(trim(t.substr(eq + 1)));
    const auto r = requirement_from_string(key);
    if (!r)
      throw ProfileError("profile line " + std::to_string(number) +
                         ": unknown requirement '" + key + "'");
    if (value != "mandatory" && value != "optional")
      throw ProfileError("profile line " + std::to_string(number) +
                         ": value must be mandatory or optional");
    p.set_mandatory(*r, value == "mandatory");
  }
  return p;
}

FormatReport check_format(const StructuredDoc &doc, const Profile &profile) {
  FormatReport report;
  for (auto r : kAllRequirements) {
    const bool mandatory = profile.is_mandatory(r);
    Judgement j;
    switch (r) {
    case Requirement::kSectionHeaders: j = judge_headers(doc, mandatory); break;
    case Requirement::kSmilesCodeBlocks: j = judge_smiles(doc, mandatory); break;
    case Requirement::kMarkdownFormatting: j = judge_markdown(doc); break;
    case Requirement::kBulletedLists: j = judge_lists(doc); break;
    case Requirement::kTabularData: j = judge_tables(doc); break;
    case Requirement::kJsonStructures: j = judge_json(doc); break;
    case Requirement::kChemicalEquations: j = judge_arrows(doc); break;
    }
    const auto k = static_cast<std::size_t>(r);
    if (!mandatory && !j.present) {
      report.verdicts[k] = Verdict::kNotApplicable;
    } else if (mandatory && !j.present && j.pass) {
      // Absent but required, and the rule itself has nothing to check.
      report.verdicts[k] = Verdict::kFail;
      report.reasons[k] = "required but absent";
    } else {
      report.verdicts[k] = j.pass ? Verdict::kPass : Verdict::kFail;
      report.reasons[k] = j.reason;
    }
  }
  report.adherent = std::none_of(
      report.verdicts.begin(), report.verdicts.end(),
      [](Verdict v) { return v == Verdict::kFail; });
  return report;
}

stats::RateEstimate corpus_adherence_rate(std::span<const FormatReport> reports,
                                          double confidence) {
  if (reports.empty())
    throw stats::EmptyCorpus("corpus_adherence_rate: no reports");
  const long ok = std::count_if(reports.begin(), reports.end(),
                                [](const FormatReport &r) { return r.adherent; });
  return stats::wilson_from_counts(ok, static_cast<long>(reports.size()),
                                   confidence);
}

double RequirementRate::per_applicable() const {
  return applicable == 0 ? 1.0
                         : static_cast<double>(passed) /
                               static_cast<double>(applicable);
}

double RequirementRate::per_all() const {
  return total == 0 ? 1.0
                    : static_cast<double>(total - (applicable - passed)) /
                          static_cast<double>(total);
}

std::array<RequirementRate, kAllRequirements.size()>
requirement_rates(std::span<const FormatReport> reports) {
  std::array<RequirementRate, kAllRequirements.size()> out;
  for (std::size_t k = 0; k < kAllRequirements.size(); ++k) {
    out[k].requirement = kAllRequirements[k];
    for (const auto &r : reports) {
      ++out[k].total;
      if (r.verdicts[k] == Verdict::kNotApplicable)
        continue;
      ++out[k].applicable;
      if (r.verdicts[k] == Verdict::kPass)
        ++out[k].passed;
    }
  }
  return out;
}

std::string to_jsonl(const FormatReport &report, const StructuredDoc &doc) {
  nlohmann::ordered_json j;
  j["adherent"] = report.adherent;
  nlohmann::ordered_json verdicts, reasons;
  for (auto r : kAllRequirements) {
    const std::string name(to_string(r));
    verdicts[name] = to_string(report.verdict(r));
    if (!report.reason(r).empty())
      reasons[name] = report.reason(r);
  }
  j["requirements"] = std::move(verdicts);
  j["reasons"] = reasons.is_null() ? nlohmann::ordered_json::object() : reasons;
  auto defects = nlohmann::ordered_json::array();
  for (const auto &d : doc.defects)
    defects.push_back({{"kind", to_string(d.kind)},
                       {"begin", d.span.begin},
                       {"detail", d.detail}});
  j["defects"] = std::move(defects);
  j["smiles"] = extract_smiles(doc);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace chemeval::protocol
