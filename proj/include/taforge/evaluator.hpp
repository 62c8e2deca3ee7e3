#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "taforge/reviewer.hpp"

namespace taforge::evaluator {

struct ReferenceTheme {
  std::string ref_id;  // e.g. "3a"
  std::string name;
  std::string description;  // may be empty
  std::vector<std::string> keywords;
};

enum class Verdict { phase3, phase4, as_code, missed, unclear };
const char* verdict_name(Verdict v);

struct CodeHit {
  int index = 0;
  std::string name;
  std::string matched_keyword;
  std::string field;  // "name" or "description"
};

struct MatchRecord {
  std::string ref_id;
  Verdict verdict = Verdict::missed;
  int best_phase3_theme = -1;
  double best_phase3_score = 0;
  int best_phase4_run = -1;
  int best_phase4_theme = -1;
  double best_phase4_score = 0;
  std::vector<CodeHit> code_hits;
  std::optional<std::string> human_verdict;  // supersedes in reports, both recorded
};

// Case-insensitive whole-word search over names and descriptions; at most
// one hit per code (the first matching field), sorted by index.
std::vector<CodeHit> search_codes(const codegen::Codebook& codebook,
                                  const std::vector<std::string>& keywords);

// Verdict ladder per reference theme: phase3 when the best Phase-3
// similarity clears tau; else phase4 when any sweep theme clears tau; else
// unclear when the best theme-level score lands in [tau/2, tau); else
// as_code when the keyword search hits; else missed.
std::vector<MatchRecord> match_themes(const themer::ThemeSet& phase3,
                                      const reviewer::StabilityReport& phase4,
                                      const std::vector<ReferenceTheme>& reference,
                                      const codegen::Codebook& codebook, double tau);

void apply_overrides(std::vector<MatchRecord>& records,
                     const std::map<std::string, std::string>& overrides);

struct ComparisonReport {
  std::string markdown;
  std::string csv;
};

// One row per reference theme plus a section listing generated themes that
// matched no reference theme. Pure rendering: regeneration from the same
// records is byte-identical.
ComparisonReport build_report(const std::vector<MatchRecord>& records,
                              const std::vector<ReferenceTheme>& reference,
                              const themer::ThemeSet& phase3, double tau);

std::vector<ReferenceTheme> reference_from_json(std::string_view data);
std::string reference_to_json(const std::vector<ReferenceTheme>& themes);

}  // namespace taforge::evaluator
