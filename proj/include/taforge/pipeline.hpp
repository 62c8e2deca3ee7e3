#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "taforge/codegen.hpp"
#include "taforge/corpus.hpp"
#include "taforge/evaluator.hpp"
#include "taforge/gateway.hpp"
#include "taforge/prompts.hpp"
#include "taforge/reducer.hpp"
#include "taforge/reviewer.hpp"

namespace taforge::pipeline {

enum class Phase { clean, chunk, code, reduce, themes, review, name, compare };
const char* phase_name(Phase p);
Phase phase_from_name(const std::string& name);

struct RunConfig {
  std::string base_url = "https://api.openai.com";
  std::string api_key_env = "OPENAI_API_KEY";
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.0;
  int context_limit = 4097;
  int reserved_response_tokens = 1000;
  int parallelism = 2;

  std::string input_dir;
  std::string runs_dir = "runs";
  std::string replay_store;
  std::string prompt_dir;      // empty -> built-in templates
  std::string stopwords_file;  // empty -> built-in list

  corpus::CleanConfig clean;
  corpus::ChunkConfig chunk;
  codegen::CodegenConfig code;
  reducer::MergePolicy merge_policy;
  int shorten_char_limit = 0;  // 0 disables description shortening
  int theme_count = 7;
  reviewer::SweepConfig review;
  std::string reference_file;
  std::string overrides_file;
  double compare_tau = 0.35;

  gateway::LiveConfig live;  // base_url/api_key filled at gateway build time
};

// Strict parse: unknown keys are rejected. Relative paths are resolved
// against the config file's directory.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(std::string_view data, const std::string& base_dir);

struct RunContext {
  RunConfig config;
  std::string config_hash;
  std::string run_id = "run";
  gateway::BackendKind backend = gateway::BackendKind::replay;
  bool record = false;

  std::string run_dir() const;
  std::string artifact(const std::string& rel) const;
};

struct PhaseOutcome {
  std::vector<std::string> notes;  // warnings, lints, per-file issues
  std::map<std::string, std::string> artifacts;  // relative path -> hash
};

// Executes one phase against runs/{run_id}/{phase}/, appends a manifest
// entry, and enforces phase-order prerequisites. Hard errors propagate as
// taforge::Error with the proper exit code.
PhaseOutcome run_phase(const RunContext& ctx, Phase phase);

// Artifacts a human may edit between phases without failing verification.
const std::vector<std::string>& editable_artifacts();

struct VerifyReport {
  std::vector<std::string> ok;
  std::vector<std::string> edited;  // drift in a declared editable artifact
  std::vector<std::string> drifted;
  std::vector<std::string> missing;
  bool clean() const { return drifted.empty() && missing.empty(); }
};

VerifyReport verify_manifest(const RunContext& ctx);

}  // namespace taforge::pipeline
