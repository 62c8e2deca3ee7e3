#include "taforge/reviewer.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"
#include "taforge/errors.hpp"
#include "taforge/text.hpp"

using nlohmann::json;

namespace taforge::reviewer {

const std::set<std::string>& default_stopwords() {
  // Small fixed list: common English function words plus the "This group
  // includes topics related to ..." boilerplate the theming replies repeat.
  static const std::set<std::string> words = {
      "a",        "all",       "also",     "among",   "an",       "and",     "any",
      "are",      "as",        "at",       "be",      "been",     "between", "both",
      "by",       "can",       "could",    "do",      "does",     "each",    "etc",
      "for",      "from",      "had",      "has",     "have",     "how",     "if",
      "in",       "into",      "is",       "it",      "its",      "may",     "might",
      "more",     "most",      "not",      "of",      "on",       "one",     "or",
      "other",    "our",       "some",     "such",    "than",     "that",    "the",
      "their",    "them",      "they",     "this",    "these",    "those",   "to",
      "two",      "very",      "was",      "we",      "well",     "were",    "what",
      "when",     "where",     "whether",  "which",   "while",    "will",    "with",
      "would",    "you",       "your",
      // theming-reply boilerplate
      "group",    "groups",    "include",  "includes", "included", "including",
      "topic",    "topics",    "related",  "relating", "discussion", "discussions",
  };
  return words;
}

double similarity(const themer::Theme& a, const themer::Theme& b,
                  const std::set<std::string>& stopwords) {
  auto tokens_of = [&](const themer::Theme& t) {
    std::set<std::string> tokens;
    for (auto& tok : text::content_tokens(t.name + " " + t.description, stopwords))
      tokens.insert(std::move(tok));
    return tokens;
  };
  std::set<std::string> ta = tokens_of(a);
  std::set<std::string> tb = tokens_of(b);
  if (ta.empty() && tb.empty()) return 1.0;
  std::size_t intersection = 0;
  for (const auto& tok : ta)
    if (tb.count(tok)) ++intersection;
  std::size_t unions = ta.size() + tb.size() - intersection;
  return unions == 0 ? 0.0 : static_cast<double>(intersection) / static_cast<double>(unions);
}

SweepResult sweep(const codegen::Codebook& codebook, const SweepConfig& config,
                  gateway::Gateway& gw, gateway::ModelConfig model,
                  const std::string& prompt_template) {
  if (config.k_runs < 1) throw ValidationError("k_runs must be >= 1");
  model.temperature = config.temperature;
  SweepResult result;
  // Sequential on purpose: sweep recordings for one fingerprint are an
  // ordered list, and issue order decides which run gets which response.
  for (int run = 0; run < config.k_runs; ++run) {
    try {
      themer::ThemeSet set = themer::generate_themes(codebook, config.n, gw, model,
                                                     prompt_template);
      set.run_ordinal = run;
      result.sets.push_back(std::move(set));
    } catch (const HallucinationError&) {
      throw;
    } catch (const Error& e) {
      result.failures.push_back("run " + std::to_string(run) + ": " + e.what());
    }
  }
  return result;
}

StabilityReport cluster_and_score(const std::vector<themer::ThemeSet>& sets,
                                  const std::optional<themer::ThemeSet>& baseline, double tau,
                                  const std::set<std::string>& stopwords) {
  if (sets.empty() && !baseline) throw ValidationError("cluster_and_score: no theme sets");

  StabilityReport report;
  report.tau = tau;
  report.baseline = baseline;
  report.sweep_sets = sets;
  report.runs_considered = static_cast<int>(sets.size()) + (baseline ? 1 : 0);

  struct Entry {
    int run;
    const themer::Theme* theme;
  };
  std::vector<Entry> entries;
  if (baseline)
    for (const auto& t : baseline->themes) entries.push_back({kBaselineRun, &t});
  for (const auto& set : sets)
    for (const auto& t : set.themes) entries.push_back({set.run_ordinal, &t});

  std::vector<std::vector<Entry>> clusters;
  for (const auto& entry : entries) {
    bool placed = false;
    for (auto& cluster : clusters) {
      for (const auto& member : cluster) {
        if (similarity(*entry.theme, *member.theme, stopwords) >= tau) {
          cluster.push_back(entry);
          placed = true;
          break;
        }
      }
      if (placed) break;
    }
    if (!placed) clusters.push_back({entry});
  }

  for (const auto& cluster : clusters) {
    ThemeCluster out;
    std::set<int> runs;
    for (const auto& member : cluster) {
      out.members.push_back({member.run, member.theme->theme_id});
      runs.insert(member.run);
    }
    out.stability = static_cast<double>(runs.size()) / report.runs_considered;

    // label: member name with the highest summed similarity to the rest
    double best = -1;
    for (const auto& candidate : cluster) {
      double centrality = 0;
      for (const auto& member : cluster)
        if (&member != &candidate)
          centrality += similarity(*candidate.theme, *member.theme, stopwords);
      if (centrality > best) {
        best = centrality;
        out.label = candidate.theme->name;
      }
    }

    std::size_t pos = report.clusters.size();
    if (out.stability >= 0.5) report.consistent_majority.push_back(pos);
    if (static_cast<int>(runs.size()) == report.runs_considered)
      report.consistent_all.push_back(pos);
    bool has_baseline = runs.count(kBaselineRun) > 0;
    std::set<int> sweep_runs = runs;
    sweep_runs.erase(kBaselineRun);
    if (baseline && !has_baseline && sweep_runs.size() >= 2)
      report.candidates_overlooked.push_back(pos);

    report.clusters.push_back(std::move(out));
  }
  return report;
}

namespace {

const themer::Theme* find_theme(const StabilityReport& report, const ClusterMember& m) {
  const themer::ThemeSet* set = nullptr;
  if (m.run == kBaselineRun) {
    set = report.baseline ? &*report.baseline : nullptr;
  } else {
    for (const auto& s : report.sweep_sets)
      if (s.run_ordinal == m.run) set = &s;
  }
  if (!set) return nullptr;
  for (const auto& t : set->themes)
    if (t.theme_id == m.theme_id) return &t;
  return nullptr;
}

std::string run_title(int run) {
  return run == kBaselineRun ? "Baseline" : "Test_" + std::to_string(run + 1);
}

}  // namespace

std::string stability_to_json(const StabilityReport& report) {
  json j;
  j["tau"] = report.tau;
  j["runs_considered"] = report.runs_considered;
  j["clusters"] = json::array();
  for (const auto& c : report.clusters) {
    json members = json::array();
    for (const auto& m : c.members) {
      const themer::Theme* theme = find_theme(report, m);
      members.push_back({{"run", m.run},
                         {"theme_id", m.theme_id},
                         {"name", theme ? theme->name : ""}});
    }
    j["clusters"].push_back(
        {{"label", c.label}, {"stability", c.stability}, {"members", members}});
  }
  j["consistent_majority"] = report.consistent_majority;
  j["consistent_all"] = report.consistent_all;
  j["candidates_overlooked"] = report.candidates_overlooked;
  return j.dump(2) + "\n";
}

std::string stability_to_markdown(const StabilityReport& report) {
  std::vector<int> runs;
  if (report.baseline) runs.push_back(kBaselineRun);
  for (const auto& s : report.sweep_sets) runs.push_back(s.run_ordinal);

  std::string md = "| Nr. | Cluster |";
  for (int run : runs) md += " " + run_title(run) + " |";
  md += " Stability |\n|----|---------|";
  for (std::size_t i = 0; i < runs.size(); ++i) md += "---|";
  md += "----------|\n";

  char buf[16];
  for (std::size_t i = 0; i < report.clusters.size(); ++i) {
    const auto& c = report.clusters[i];
    md += "| " + std::to_string(i + 1) + " | " + c.label + " |";
    for (int run : runs) {
      std::string cell;
      for (const auto& m : c.members) {
        if (m.run != run) continue;
        const themer::Theme* theme = find_theme(report, m);
        if (!cell.empty()) cell += "; ";
        cell += theme ? theme->name : "?";
      }
      md += " " + cell + " |";
    }
    std::snprintf(buf, sizeof(buf), "%.2f", c.stability);
    md += " " + std::string(buf) + " |\n";
  }
  return md;
}

}  // namespace taforge::reviewer
