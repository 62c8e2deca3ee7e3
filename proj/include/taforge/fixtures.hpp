#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "taforge/evaluator.hpp"
#include "taforge/gateway.hpp"
#include "taforge/themer.hpp"

namespace taforge::fixtures {

// Deterministic stand-in for the live endpoint. Entries are matched by
// purpose, optional temperature, and a substring of the last message; a key
// matched by several entries is consumed in insertion order. Reports itself
// as a live backend so an attached record store persists the exchanges.
class ScriptedBackend : public gateway::Backend {
 public:
  void add(gateway::Purpose purpose, std::string key_substring, std::string content,
           std::optional<double> temperature = std::nullopt);
  std::string send(const gateway::ChatRequest& req, const std::string& fp) override;
  gateway::BackendKind kind() const override { return gateway::BackendKind::live; }

  struct Exchange {
    gateway::Purpose purpose;
    double temperature;
    std::string fingerprint;
    std::string content;
  };
  std::vector<Exchange> log() const;

 private:
  struct Entry {
    gateway::Purpose purpose;
    std::optional<double> temperature;
    std::string key;
    std::string content;
    bool used = false;
  };
  mutable std::mutex mutex_;
  std::vector<Entry> entries_;
  std::vector<Exchange> log_;
};

// Shape of one synthetic dataset: corpus geometry plus the code/theme counts
// its replay store is scripted to produce.
struct DatasetShape {
  std::string tag;
  int docs = 0;
  int paragraphs_per_doc = 0;
  int words_per_paragraph = 500;
  int expected_chunks = 0;
  int raw_codes = 0;
  int reduced_codes = 0;  // pair merges + singletons
  int theme_count = 0;
  double sweep_temperature = 1.0;
  int sweep_runs = 3;
};

DatasetShape gaming_shape();      // 56 chunks -> 161 -> 89 -> 11
DatasetShape teaching_shape();    // 35 chunks -> 101 -> 63 -> 7
DatasetShape interviews_shape();  // small 3-interview corpus for end-to-end tests

// Writes shape.docs plain-text interviews; every paragraph is exactly
// words_per_paragraph words and starts with a marker unique in the corpus.
void write_corpus(const std::string& dir, const DatasetShape& shape);

// Scripted code labels; a handful of indices carry meaningful names so the
// keyword-search examples have something to find.
std::string code_name(const DatasetShape& shape, int raw_index);
std::string code_description(const DatasetShape& shape, int raw_index);

// Theme catalogues the replay stores feed back: the baseline run and the
// higher-temperature sweep runs, member indices spread round-robin over the
// reduced codebook.
themer::ThemeSet phase3_themes(const DatasetShape& shape);
std::vector<themer::ThemeSet> sweep_themes(const DatasetShape& shape);

// Reference analyses for the compare phase (names and condensed
// descriptions, plus keywords driving the code-level search).
std::vector<evaluator::ReferenceTheme> reference_themes(const DatasetShape& shape);

// Run configuration pointing at one dataset's fixture files.
std::string run_config_json(const DatasetShape& shape, const std::string& corpus_dir,
                            const std::string& replay_path, const std::string& reference_path,
                            const std::string& runs_dir, int parallelism);

struct BuildResult {
  std::string corpus_dir;
  std::string replay_path;
  std::string reference_path;
  std::string config_path;
  // corrupted stores (interviews only): dedup / theming reply naming an
  // index outside the codebook, for exit-code tests
  std::string bad_dedup_replay;
  std::string bad_theming_replay;
};

// Materializes corpus, replay store, reference and config files under
// fixtures_dir, exercising the real pipeline modules against a scripted
// backend so every recorded fingerprint is authentic.
BuildResult build_dataset(const std::string& fixtures_dir, const DatasetShape& shape);

// Single-exchange store reproducing the poets smoke example.
extern const char* const kPoetsPrompt;
extern const char* const kPoetsResponse;
gateway::ChatRequest poets_request();
void build_poets_store(const std::string& path);

void build_all(const std::string& fixtures_dir);

}  // namespace taforge::fixtures
