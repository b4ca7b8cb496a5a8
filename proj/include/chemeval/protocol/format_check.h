//
// Project chemeval - Copyright 2026 chemeval authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMEVAL_PROTOCOL_FORMAT_CHECK_H_
#define CHEMEVAL_PROTOCOL_FORMAT_CHECK_H_

#include <array>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "chemeval/protocol/document.h"
#include "chemeval/stats/proportions.h"

namespace chemeval::protocol {

enum class Requirement {
  kSectionHeaders,
  kSmilesCodeBlocks,
  kMarkdownFormatting,
  kBulletedLists,
  kTabularData,
  kJsonStructures,
  kChemicalEquations,
};

inline constexpr std::array<Requirement, 7> kAllRequirements = {
    Requirement::kSectionHeaders,     Requirement::kSmilesCodeBlocks,
    Requirement::kMarkdownFormatting, Requirement::kBulletedLists,
    Requirement::kTabularData,        Requirement::kJsonStructures,
    Requirement::kChemicalEquations,
};

std::string_view to_string(Requirement r);
std::optional<Requirement> requirement_from_string(std::string_view name);

enum class Verdict { kPass, kFail, kNotApplicable };

std::string_view to_string(Verdict v);

class ProfileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Which requirements are mandatory. A mandatory requirement is judged even
/// when its feature is absent from the document.
struct Profile {
  std::array<bool, kAllRequirements.size()> mandatory{};

  bool is_mandatory(Requirement r) const {
    return mandatory[static_cast<std::size_t>(r)];
  }
  void set_mandatory(Requirement r, bool on) {
    mandatory[static_cast<std::size_t>(r)] = on;
  }

  /// Think block first, final "## Summary", molecules in smiles fences.
  static Profile default_template();
  /// Lines "<requirement> = mandatory|optional"; '#' starts a comment.
  /// Unlisted requirements are optional. Throws ProfileError.
  static Profile parse(std::istream &in);
};

struct FormatReport {
  std::array<Verdict, kAllRequirements.size()> verdicts{};
  std::array<std::string, kAllRequirements.size()> reasons;
  bool adherent = false;

  Verdict verdict(Requirement r) const {
    return verdicts[static_cast<std::size_t>(r)];
  }
  const std::string &reason(Requirement r) const {
    return reasons[static_cast<std::size_t>(r)];
  }
};

/// Adherent iff no applicable requirement fails.
FormatReport check_format(const StructuredDoc &doc,
                          const Profile &profile = Profile::default_template());

/// Throws stats::EmptyCorpus.
stats::RateEstimate corpus_adherence_rate(std::span<const FormatReport> reports,
                                          double confidence = 0.95);

struct RequirementRate {
  Requirement requirement;
  long passed = 0;
  long applicable = 0;
  long total = 0;
  /// passed / applicable (1 when nothing was applicable).
  double per_applicable() const;
  /// Documents not failing this requirement / all documents.
  double per_all() const;
};

std::array<RequirementRate, kAllRequirements.size()>
requirement_rates(std::span<const FormatReport> reports);

std::string to_jsonl(const FormatReport &report, const StructuredDoc &doc);

}  // namespace chemeval::protocol

#endif  // CHEMEVAL_PROTOCOL_FORMAT_CHECK_H_
