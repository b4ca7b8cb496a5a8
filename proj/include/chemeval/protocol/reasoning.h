//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_PROTOCOL_REASONING_H_
#define CHEMEVAL_PROTOCOL_REASONING_H_

#include <string>
#include <string_view>
#include <vector>

namespace chemeval::protocol {

enum class Confidence { kUnstated, kHigh, kModerate, kLow };

std::string_view to_string(Confidence c);

struct ConfidenceLexicon {
  std::vector<std::string> low{"uncertain", "unclear", "cannot determine",
                               "unsure"};
  std::vector<std::string> moderate{"might", "may", "possibly", "could",
                                    "uncertainty"};
  std::vector<std::string> high{"clearly", "reliably", "will", "is optimal"};
  std::vector<std::string> step_markers{"First",  "Next",      "Then",
                                        "Therefore", "However", "Examining",
                                        "To",     "Instead"};
};

struct ReasoningTrace {
  int step_count = 0;
  Confidence confidence = Confidence::kUnstated;
  int factual_claims = 0;
};

/// Steps: one per enumerated or bulleted item, plus one per remaining
/// sentence that opens with a step marker. Confidence: the highest-priority
/// bucket (low > moderate > high) with a whole-word, case-insensitive match.
/// Claims: declarative sentences and items of three words or more.
ReasoningTrace analyze_reasoning(std::string_view think,
                                 const ConfidenceLexicon &lexicon = {});

}  // namespace chemeval::protocol

#endif  // CHEMEVAL_PROTOCOL_REASONING_H_
