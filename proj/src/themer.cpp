#include "taforge/themer.hpp"

#include <set>

#include "json.hpp"
#include "taforge/errors.hpp"
#include "taforge/prompts.hpp"
#include "taforge/text.hpp"

using nlohmann::json;

namespace taforge::themer {

ThemeCountSuggestion suggest_theme_count(int reference_count) {
  if (reference_count < 1) throw ValidationError("reference_count must be >= 1");
  ThemeCountSuggestion s;
  s.low = reference_count;
  s.high = reference_count + 3;
  // Lean just past the reference count, as the calibration choices did
  // (10 -> 11, 5 -> 7): +2 when the count sits two below a multiple of 3.
  s.preferred = reference_count + (reference_count % 3 == 2 ? 2 : 1);
  return s;
}

ThemeSet generate_themes(const codegen::Codebook& codebook, int n, gateway::Gateway& gw,
                         const gateway::ModelConfig& model, const std::string& prompt_template) {
  if (codebook.stage == codegen::Stage::raw)
    throw ValidationError("generate_themes expects a reduced or shortened codebook");
  if (n < 1) throw ValidationError("theme count must be >= 1");

  std::vector<std::string> lines;
  lines.reserve(codebook.codes.size());
  for (const auto& code : codebook.codes)
    lines.push_back(prompts::theming_topic_line(code.name, code.description));

  gateway::ChatRequest req;
  req.config = model;
  req.purpose = gateway::Purpose::theming;
  req.messages.push_back(
      {"user", prompts::render(prompt_template, {{"n", std::to_string(n)},
                                                 {"topics", prompts::join_topics(lines)}})});
  gateway::ChatResponse resp = gw.complete(req);

  json parsed = json::parse(codegen::extract_json_object(resp.content));
  if (!parsed.contains("groups") || !parsed["groups"].is_array() || parsed["groups"].empty())
    throw ValidationError("malformed_response: no theme groups in: " + resp.content);

  std::set<int> valid;
  for (const auto& code : codebook.codes) valid.insert(code.index);

  ThemeSet set;
  set.n_requested = n;
  set.temperature = model.temperature;
  set.codebook_stage = codegen::stage_name(codebook.stage);
  set.raw_response = resp.content;

  std::set<int> assigned;
  for (const auto& g : parsed["groups"]) {
    Theme theme;
    theme.theme_id = static_cast<int>(set.themes.size());
    theme.name = g.value("name", "");
    theme.description = g.value("description", "");
    if (theme.name.empty() || theme.description.empty())
      throw ValidationError("malformed_response: theme group missing name/description in: " +
                            resp.content);
    const json* members = nullptr;
    if (g.contains("topics") && g["topics"].is_array()) members = &g["topics"];
    else if (g.contains("indices") && g["indices"].is_array()) members = &g["indices"];
    if (!members)
      throw ValidationError("malformed_response: theme group missing topic numbers in: " +
                            resp.content);
    std::vector<int> bad;
    for (const auto& v : *members) {
      if (!v.is_number_integer())
        throw ValidationError("malformed_response: non-numeric topic number in: " + resp.content);
      int idx = v.get<int>();
      if (!valid.count(idx)) {
        bad.push_back(idx);
        continue;
      }
      theme.member_indices.push_back(idx);
      assigned.insert(idx);
    }
    if (!bad.empty()) {
      std::string offenders;
      for (int idx : bad) offenders += " " + std::to_string(idx);
      throw HallucinationError("theming response references unknown indices:" + offenders);
    }
    set.themes.push_back(std::move(theme));
  }

  for (int idx : valid)
    if (!assigned.count(idx)) set.unassigned.push_back(idx);
  if (static_cast<int>(set.themes.size()) != n)
    set.warnings.push_back("model returned " + std::to_string(set.themes.size()) +
                           " themes, requested " + std::to_string(n));
  if (!set.unassigned.empty())
    set.warnings.push_back(std::to_string(set.unassigned.size()) +
                           " codes assigned to no theme");
  return set;
}

const std::string& representative_quote(const codegen::Code& code) {
  if (code.quotes.empty()) throw ValidationError("code has no quotes: " + code.name);
  return code.quotes.front();
}

NamedSummary name_theme(const Theme& theme, const codegen::Codebook& codebook,
                        gateway::Gateway& gw, const gateway::ModelConfig& model,
                        const std::string& prompt_template) {
  std::vector<std::string> lines;
  for (int idx : theme.member_indices) {
    const codegen::Code& code = codebook.codes.at(static_cast<std::size_t>(idx));
    lines.push_back(
        prompts::naming_topic_line(code.name, code.description, representative_quote(code)));
  }

  gateway::ChatRequest req;
  req.config = model;
  req.purpose = gateway::Purpose::naming;
  req.messages.push_back(
      {"user", prompts::render(prompt_template, {{"topics", prompts::join_topics(lines)}})});
  gateway::ChatResponse resp = gw.complete(req);
  if (resp.content.empty()) throw ValidationError("malformed_response: empty naming response");

  json parsed = json::parse(codegen::extract_json_object(resp.content));
  NamedSummary summary;
  summary.theme_id = theme.theme_id;
  summary.new_name = parsed.value("name", "");
  summary.summary = parsed.value("summary", "");
  summary.raw_response = resp.content;
  if (summary.new_name.empty() || summary.summary.empty())
    throw ValidationError("malformed_response: naming reply missing name/summary in: " +
                          resp.content);
  if (text::count_words(summary.new_name) > 5)
    summary.lints.push_back("name over 5 words: \"" + summary.new_name + "\"");
  int sentences = 0;
  for (char c : summary.summary)
    if (c == '.' || c == '!' || c == '?') ++sentences;
  if (sentences != 2)
    summary.lints.push_back("summary is not 2 sentences (counted " +
                            std::to_string(sentences) + " terminators)");
  return summary;
}

std::string themeset_to_json(const ThemeSet& set) {
  json j;
  j["n_requested"] = set.n_requested;
  j["temperature"] = set.temperature;
  j["codebook_stage"] = set.codebook_stage;
  j["run_ordinal"] = set.run_ordinal;
  j["themes"] = json::array();
  for (const auto& t : set.themes)
    j["themes"].push_back({{"theme_id", t.theme_id},
                           {"name", t.name},
                           {"description", t.description},
                           {"member_indices", t.member_indices}});
  j["unassigned"] = set.unassigned;
  j["warnings"] = set.warnings;
  j["raw_response"] = set.raw_response;
  return j.dump(2) + "\n";
}

ThemeSet themeset_from_json(std::string_view data) {
  json j = json::parse(data);
  ThemeSet set;
  set.n_requested = j.value("n_requested", 0);
  set.temperature = j.value("temperature", 0.0);
  set.codebook_stage = j.value("codebook_stage", "");
  set.run_ordinal = j.value("run_ordinal", 0);
  for (const auto& t : j.at("themes")) {
    Theme theme;
    theme.theme_id = t.at("theme_id").get<int>();
    theme.name = t.at("name").get<std::string>();
    theme.description = t.at("description").get<std::string>();
    for (const auto& m : t.at("member_indices")) theme.member_indices.push_back(m.get<int>());
    set.themes.push_back(std::move(theme));
  }
  for (const auto& u : j.value("unassigned", json::array())) set.unassigned.push_back(u.get<int>());
  for (const auto& w : j.value("warnings", json::array()))
    set.warnings.push_back(w.get<std::string>());
  set.raw_response = j.value("raw_response", "");
  return set;
}

std::string named_summaries_to_json(const std::vector<NamedSummary>& summaries) {
  json j;
  j["named_themes"] = json::array();
  for (const auto& s : summaries)
    j["named_themes"].push_back({{"theme_id", s.theme_id},
                                 {"name", s.new_name},
                                 {"summary", s.summary},
                                 {"lints", s.lints},
                                 {"raw_response", s.raw_response}});
  return j.dump(2) + "\n";
}

std::vector<NamedSummary> named_summaries_from_json(std::string_view data) {
  json j = json::parse(data);
  std::vector<NamedSummary> out;
  for (const auto& s : j.at("named_themes")) {
    NamedSummary summary;
    summary.theme_id = s.at("theme_id").get<int>();
    summary.new_name = s.at("name").get<std::string>();
    summary.summary = s.at("summary").get<std::string>();
    for (const auto& l : s.value("lints", json::array()))
      summary.lints.push_back(l.get<std::string>());
    summary.raw_response = s.value("raw_response", "");
    out.push_back(std::move(summary));
  }
  return out;
}

}  // namespace taforge::themer
