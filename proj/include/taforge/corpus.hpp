#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace taforge::corpus {

struct Document {
  std::string id;  // file stem, unique within a corpus
  std::string text;
  std::string source_path;
};

// One row of the chunks CSV.
struct Chunk {
  std::string file_name;  // part_{ordinal}_{doc_id}.txt
  std::string text;
  int tokens = 0;
  std::string doc_id;
  int ordinal = 0;
};

struct TokenEstimatorConfig {
  enum class Mode { word_heuristic, plugin };
  Mode mode = Mode::word_heuristic;
  double words_per_token_factor = 1.0;
  std::string plugin_name;
};

struct ChunkConfig {
  int target_tokens = 2500;
  double slack_fraction = 0.05;  // one chunk in the calibration data runs to 2513
  enum class Boundary { paragraph, sentence };
  Boundary boundary = Boundary::paragraph;
  TokenEstimatorConfig estimator;
};

struct CleanConfig {
  // Literal markers. Text before the first occurrence of start_marker and
  // after the last occurrence of end_marker is dropped; markers are kept.
  std::optional<std::string> start_marker;
  std::optional<std::string> end_marker;
};

// Estimator plugins, looked up by TokenEstimatorConfig::plugin_name.
using TokenEstimator = std::function<int(std::string_view)>;
void register_token_estimator(const std::string& name, TokenEstimator fn);

// word_heuristic: ceil(word count * factor). plugin: delegates to the
// registered estimator; unregistered name -> ValidationError.
int estimate_tokens(std::string_view text, const TokenEstimatorConfig& config);

std::string clean_text(std::string_view raw, const CleanConfig& config);

struct LoadResult {
  std::vector<Document> documents;
  std::vector<std::string> issues;  // per-file errors and rejections
};

// Reads every regular .txt file in the directory (sorted by name), applies
// marker cleaning and whitespace normalization. Unreadable files and files
// that clean down to nothing are reported in issues; the run continues.
LoadResult load_and_clean(const std::string& dir, const CleanConfig& config);

struct ChunkResult {
  std::vector<Chunk> chunks;
  std::vector<std::string> warnings;  // oversized single boundary units
};

// Greedy fill at boundary granularity. Chunk texts are byte-preserving
// slices: their concatenation equals doc.text exactly.
ChunkResult chunk(const Document& doc, const ChunkConfig& config);

inline constexpr const char* kChunksCsvHeader = "FileName,Interview_chunk,Tokens,DocId,Ordinal";

std::string chunks_to_csv(const std::vector<Chunk>& chunks);  // empty list -> ValidationError
std::vector<Chunk> chunks_from_csv(std::string_view data);

// Token column vs a recomputed estimate; mismatches are warnings, the
// estimator may differ across runs.
std::vector<std::string> check_token_column(const std::vector<Chunk>& chunks,
                                            const TokenEstimatorConfig& config);

}  // namespace taforge::corpus
