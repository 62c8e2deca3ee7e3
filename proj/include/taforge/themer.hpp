#pragma once

#include <string>
#include <vector>

#include "taforge/codegen.hpp"
#include "taforge/gateway.hpp"

namespace taforge::themer {

struct Theme {
  int theme_id = 0;
  std::string name;
  std::string description;
  std::vector<int> member_indices;  // may overlap with other themes
};

struct ThemeSet {
  std::vector<Theme> themes;
  int n_requested = 0;
  double temperature = 0.0;
  std::string codebook_stage;
  int run_ordinal = 0;
  std::vector<int> unassigned;  // codebook indices in no theme
  std::vector<std::string> warnings;
  std::string raw_response;
};

struct NamedSummary {
  int theme_id = 0;
  std::string new_name;  // target <= 5 words, linted only
  std::string summary;   // target 2 sentences, linted only
  std::vector<std::string> lints;
  std::string raw_response;
};

// Suggested theme-count range [reference_count, reference_count + 3] plus a
// default leaning just past the reference count.
struct ThemeCountSuggestion {
  int low = 0;
  int high = 0;
  int preferred = 0;
};
ThemeCountSuggestion suggest_theme_count(int reference_count);

// Renders Prompt 3 over names + descriptions (quotes stay out of the prompt
// to protect the token budget), requests n groups, validates every returned
// index against the codebook (HallucinationError on violation). A theme
// count differing from n is a warning, not an error.
ThemeSet generate_themes(const codegen::Codebook& codebook, int n, gateway::Gateway& gw,
                         const gateway::ModelConfig& model, const std::string& prompt_template);

// Renders Prompt 4 over the member codes (name, description, one quote each;
// the existing theme name and description are deliberately withheld).
NamedSummary name_theme(const Theme& theme, const codegen::Codebook& codebook,
                        gateway::Gateway& gw, const gateway::ModelConfig& model,
                        const std::string& prompt_template);

// Picks the quote Phase 5 sends for a code: the representative's quote,
// which carries the code's verification status (grounded evidence first).
const std::string& representative_quote(const codegen::Code& code);

std::string themeset_to_json(const ThemeSet& set);
ThemeSet themeset_from_json(std::string_view data);

std::string named_summaries_to_json(const std::vector<NamedSummary>& summaries);
std::vector<NamedSummary> named_summaries_from_json(std::string_view data);

}  // namespace taforge::themer
