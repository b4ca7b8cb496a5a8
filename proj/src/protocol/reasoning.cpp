//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemeval/protocol/reasoning.h"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

namespace chemeval::protocol {

std::string_view to_string(Confidence c) {
  switch (c) {
  case Confidence::kUnstated: return "unstated";
  case Confidence::kHigh: return "high";
  case Confidence::kModerate: return "moderate";
  case Confidence::kLow: return "low";
  }
  return "";
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

std::vector<std::string> split_sentences(const std::string &text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    cur += text[i];
    const char c = text[i];
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == text.size() ||
         std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      if (auto t = trim(cur); !t.empty())
        out.push_back(std::move(t));
      cur.clear();
    }
  }
  if (auto t = trim(cur); !t.empty())
    out.push_back(std::move(t));
  return out;
}

bool opens_with_marker(const std::string &sentence,
                       const std::vector<std::string> &markers) {
  for (const auto &m : markers) {
    if (sentence.compare(0, m.size(), m) != 0)
      continue;
    if (sentence.size() == m.size() ||
        !std::isalnum(static_cast<unsigned char>(sentence[m.size()])))
      return true;
  }
  return false;
}

bool is_claim(const std::string &s) {
  if (s.empty() || s.back() == '?' || s.back() == '!')
    return false;
  std::istringstream words(s);
  int n = 0;
  for (std::string w; words >> w;)
    ++n;
  return n >= 3;
}

bool mentions(const std::string &lowered, const std::vector<std::string> &terms) {
  for (const auto &term : terms) {
    const std::string t = lower(term);
    for (auto pos = lowered.find(t); pos != std::string::npos;
         pos = lowered.find(t, pos + 1)) {
      const bool left_ok =
          pos == 0 || !std::isalnum(static_cast<unsigned char>(lowered[pos - 1]));
      const auto end = pos + t.size();
      const bool right_ok =
          end == lowered.size() ||
          !std::isalnum(static_cast<unsigned char>(lowered[end]));
      if (left_ok && right_ok)
        return true;
    }
  }
  return false;
}

}  // namespace

ReasoningTrace analyze_reasoning(std::string_view think,
                                 const ConfidenceLexicon &lexicon) {
  static const std::regex item(
      "^\\s*(?:\\d{1,9}[.)]|[-*+]|\xE2\x80\xA2)\\s+(.*)$");
  ReasoningTrace trace;
  const std::string text(think);
  if (trim(text).empty())
    return trace;

  // Wrapped lines continue the preceding item until a blank line.
  struct Segment {
    bool item = false;
    std::string text;
  };
  std::vector<Segment> segments(1);
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::smatch m;
    if (std::regex_match(line, m, item)) {
      segments.push_back({true, trim(m[1].str())});
    } else if (trim(line).empty()) {
      segments.emplace_back();
    } else {
      auto &t = segments.back().text;
      t += (t.empty() ? "" : " ") + trim(line);
    }
  }
  for (const auto &seg : segments) {
    if (seg.item) {
      ++trace.step_count;
      if (is_claim(seg.text))
        ++trace.factual_claims;
      continue;
    }
    for (const auto &s : split_sentences(seg.text)) {
      if (opens_with_marker(s, lexicon.step_markers))
        ++trace.step_count;
      if (is_claim(s))
        ++trace.factual_claims;
    }
  }

  const std::string lowered = lower(text);
  if (mentions(lowered, lexicon.low))
    trace.confidence = Confidence::kLow;
  else if (mentions(lowered, lexicon.moderate))
    trace.confidence = Confidence::kModerate;
  else if (mentions(lowered, lexicon.high))
    trace.confidence = Confidence::kHigh;
  return trace;
}

}  // namespace chemeval::protocol
