#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "taforge/themer.hpp"

namespace taforge::reviewer {

struct SweepConfig {
  int n = 0;
  double temperature = 1.0;  // 0.5 is the gentler default offered for review
  int k_runs = 3;
  double tau = 0.35;
  bool include_baseline = true;
};

// Run labels inside clusters: -1 is the baseline set, 0..k-1 the sweep runs.
inline constexpr int kBaselineRun = -1;

struct ClusterMember {
  int run = 0;
  int theme_id = 0;
};

struct ThemeCluster {
  std::vector<ClusterMember> members;
  std::string label;      // name of the member with highest within-cluster centrality
  double stability = 0;   // distinct runs represented / total runs considered
};

struct StabilityReport {
  std::vector<ThemeCluster> clusters;
  std::vector<std::size_t> consistent_majority;  // cluster positions, stability >= 1/2
  std::vector<std::size_t> consistent_all;       // present in every run
  std::vector<std::size_t> candidates_overlooked;
  int runs_considered = 0;
  double tau = 0;
  // the material the clusters index into, kept for reporting and evaluation
  std::optional<themer::ThemeSet> baseline;
  std::vector<themer::ThemeSet> sweep_sets;
};

const std::set<std::string>& default_stopwords();

// Jaccard overlap of normalized token sets of name + description:
// lowercase, punctuation stripped, stopwords removed. Symmetric, in [0,1],
// 1.0 for identical normalized inputs.
double similarity(const themer::Theme& a, const themer::Theme& b,
                  const std::set<std::string>& stopwords = default_stopwords());

struct SweepResult {
  std::vector<themer::ThemeSet> sets;  // run_ordinal 0..k-1, failed runs excluded
  std::vector<std::string> failures;
};

// k independent Prompt 3 generations at the sweep temperature.
SweepResult sweep(const codegen::Codebook& codebook, const SweepConfig& config,
                  gateway::Gateway& gw, gateway::ModelConfig model,
                  const std::string& prompt_template);

// Greedy single-link clustering in (run, theme_id) order: a theme joins the
// first cluster holding any member with similarity >= tau, else opens a new
// one. candidates_overlooked: clusters with no baseline member whose sweep
// members span at least two runs.
StabilityReport cluster_and_score(const std::vector<themer::ThemeSet>& sets,
                                  const std::optional<themer::ThemeSet>& baseline, double tau,
                                  const std::set<std::string>& stopwords = default_stopwords());

std::string stability_to_json(const StabilityReport& report);
// Markdown table, runs as columns.
std::string stability_to_markdown(const StabilityReport& report);

}  // namespace taforge::reviewer
