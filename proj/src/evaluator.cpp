#include "taforge/evaluator.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "json.hpp"
#include "taforge/errors.hpp"
#include "taforge/text.hpp"

using nlohmann::json;

namespace taforge::evaluator {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::phase3: return "phase3";
    case Verdict::phase4: return "phase4";
    case Verdict::as_code: return "as_code";
    case Verdict::missed: return "missed";
    case Verdict::unclear: return "unclear";
  }
  return "missed";
}

namespace {

bool whole_word_match(const std::string& haystack_lower, const std::string& needle_lower) {
  std::size_t pos = 0;
  while ((pos = haystack_lower.find(needle_lower, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(haystack_lower[pos - 1]));
    std::size_t end = pos + needle_lower.size();
    bool right_ok =
        end >= haystack_lower.size() || !std::isalnum(static_cast<unsigned char>(haystack_lower[end]));
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

std::string fmt_score(double s) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.3f", s);
  return buf;
}

}  // namespace

std::vector<CodeHit> search_codes(const codegen::Codebook& codebook,
                                  const std::vector<std::string>& keywords) {
  if (keywords.empty()) throw ValidationError("search_codes: keyword list is empty");
  std::vector<CodeHit> hits;
  for (const auto& code : codebook.codes) {
    std::string name_lower = text::to_lower(code.name);
    std::string desc_lower = text::to_lower(code.description);
    for (const auto& keyword : keywords) {
      std::string kw = text::to_lower(keyword);
      if (whole_word_match(name_lower, kw)) {
        hits.push_back({code.index, code.name, keyword, "name"});
        break;
      }
      if (whole_word_match(desc_lower, kw)) {
        hits.push_back({code.index, code.name, keyword, "description"});
        break;
      }
    }
  }
  std::sort(hits.begin(), hits.end(),
            [](const CodeHit& a, const CodeHit& b) { return a.index < b.index; });
  return hits;
}

std::vector<MatchRecord> match_themes(const themer::ThemeSet& phase3,
                                      const reviewer::StabilityReport& phase4,
                                      const std::vector<ReferenceTheme>& reference,
                                      const codegen::Codebook& codebook, double tau) {
  if (reference.empty()) throw ValidationError("reference theme list is empty");

  std::vector<MatchRecord> records;
  for (const auto& ref : reference) {
    themer::Theme probe;
    probe.name = ref.name;
    probe.description = ref.description;

    MatchRecord rec;
    rec.ref_id = ref.ref_id;
    for (const auto& theme : phase3.themes) {
      double score = reviewer::similarity(probe, theme);
      if (score > rec.best_phase3_score) {
        rec.best_phase3_score = score;
        rec.best_phase3_theme = theme.theme_id;
      }
    }
    for (const auto& set : phase4.sweep_sets) {
      for (const auto& theme : set.themes) {
        double score = reviewer::similarity(probe, theme);
        if (score > rec.best_phase4_score) {
          rec.best_phase4_score = score;
          rec.best_phase4_run = set.run_ordinal;
          rec.best_phase4_theme = theme.theme_id;
        }
      }
    }
    if (!ref.keywords.empty()) rec.code_hits = search_codes(codebook, ref.keywords);

    double best_theme_score = std::max(rec.best_phase3_score, rec.best_phase4_score);
    if (rec.best_phase3_score >= tau)
      rec.verdict = Verdict::phase3;
    else if (rec.best_phase4_score >= tau)
      rec.verdict = Verdict::phase4;
    else if (best_theme_score >= tau / 2)
      rec.verdict = Verdict::unclear;
    else if (!rec.code_hits.empty())
      rec.verdict = Verdict::as_code;
    else
      rec.verdict = Verdict::missed;
    records.push_back(std::move(rec));
  }
  return records;
}

void apply_overrides(std::vector<MatchRecord>& records,
                     const std::map<std::string, std::string>& overrides) {
  for (auto& rec : records) {
    auto it = overrides.find(rec.ref_id);
    if (it != overrides.end()) rec.human_verdict = it->second;
  }
}

ComparisonReport build_report(const std::vector<MatchRecord>& records,
                              const std::vector<ReferenceTheme>& reference,
                              const themer::ThemeSet& phase3, double tau) {
  if (reference.empty() || records.size() != reference.size())
    throw ValidationError("build_report: records and reference themes do not line up");

  ComparisonReport report;
  std::string& md = report.markdown;
  std::string& csvs = report.csv;

  md += "# Comparison against the reference analysis\n\n";
  md += "| Ref | Theme | Verdict | Evidence | Phase3 score | Phase4 score | Human |\n";
  md += "|-----|-------|---------|----------|--------------|--------------|-------|\n";
  csvs += "RefId,Theme,Verdict,Evidence,Phase3Score,Phase4Score,HumanVerdict\n";

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const auto& ref = reference[i];
    std::string evidence;
    switch (rec.verdict) {
      case Verdict::phase3:
        evidence = "theme " + std::to_string(rec.best_phase3_theme);
        break;
      case Verdict::phase4:
        evidence = "Test_" + std::to_string(rec.best_phase4_run + 1) + " theme " +
                   std::to_string(rec.best_phase4_theme);
        break;
      case Verdict::as_code: {
        for (const auto& hit : rec.code_hits) {
          if (!evidence.empty()) evidence += "; ";
          evidence += "'" + hit.name + "' (Index " + std::to_string(hit.index) + ")";
        }
        break;
      }
      case Verdict::unclear:
        evidence = "borderline scores";
        break;
      case Verdict::missed:
        evidence = "no match";
        break;
    }
    std::string human = rec.human_verdict.value_or("");
    md += "| " + ref.ref_id + " | " + ref.name + " | " + verdict_name(rec.verdict) + " | " +
          evidence + " | " + fmt_score(rec.best_phase3_score) + " | " +
          fmt_score(rec.best_phase4_score) + " | " + human + " |\n";
    csvs += ref.ref_id + "," + "\"" + ref.name + "\"," + verdict_name(rec.verdict) + ",\"" +
            evidence + "\"," + fmt_score(rec.best_phase3_score) + "," +
            fmt_score(rec.best_phase4_score) + "," + human + "\n";
  }

  // Generated themes no reference theme accounts for.
  md += "\n## Generated themes matching no reference theme\n\n";
  bool any = false;
  for (const auto& theme : phase3.themes) {
    double best = 0;
    for (const auto& ref : reference) {
      themer::Theme probe;
      probe.name = ref.name;
      probe.description = ref.description;
      best = std::max(best, reviewer::similarity(probe, theme));
    }
    if (best < tau) {
      md += "- " + theme.name + " (best reference score " + fmt_score(best) + ")\n";
      any = true;
    }
  }
  if (!any) md += "(none)\n";
  return report;
}

std::vector<ReferenceTheme> reference_from_json(std::string_view data) {
  json j = json::parse(data);
  std::vector<ReferenceTheme> themes;
  for (const auto& t : j.at("reference_themes")) {
    ReferenceTheme ref;
    ref.ref_id = t.at("ref_id").get<std::string>();
    ref.name = t.at("name").get<std::string>();
    ref.description = t.value("description", "");
    for (const auto& k : t.value("keywords", json::array()))
      ref.keywords.push_back(k.get<std::string>());
    if (ref.ref_id.empty() || ref.name.empty())
      throw ValidationError("reference theme missing ref_id or name");
    themes.push_back(std::move(ref));
  }
  return themes;
}

std::string reference_to_json(const std::vector<ReferenceTheme>& themes) {
  json j;
  j["reference_themes"] = json::array();
  for (const auto& t : themes)
    j["reference_themes"].push_back({{"ref_id", t.ref_id},
                                     {"name", t.name},
                                     {"description", t.description},
                                     {"keywords", t.keywords}});
  return j.dump(2) + "\n";
}

}  // namespace taforge::evaluator
