#pragma once

#include <string>
#include <vector>

#include "taforge/corpus.hpp"
#include "taforge/gateway.hpp"

namespace taforge::codegen {

enum class Verification { verified, fuzzy, unverified };
const char* verification_name(Verification v);
Verification verification_from_name(const std::string& name);

struct Code {
  int index = 0;
  std::string name;
  std::string description;
  std::vector<std::string> quotes;  // exactly one at stage raw
  std::string source_chunk;
  Verification quote_verified = Verification::unverified;
  std::vector<int> merged_from;  // source indices, reduced stages only
};

enum class Stage { raw, reduced, shortened };
const char* stage_name(Stage s);

struct Codebook {
  std::vector<Code> codes;  // indices dense 0..n-1
  std::string provenance;   // run id
  Stage stage = Stage::raw;
};

struct CodegenConfig {
  int max_codes_per_chunk = 3;  // asking for 4 risks the response token limit downstream
  double quote_fuzzy_threshold = 0.8;
  double failure_fraction_cap = 0.10;
  int quote_line_cap_words = 70;  // ~7 lines; exceeded quotes are linted, not rejected
};

// Extracts a JSON value; one recovery pass over the outermost {...} span
// when the raw text does not parse (models wrap JSON in prose).
// Still failing -> ValidationError("malformed_response: ...") carrying the text.
std::string extract_json_object(const std::string& raw);

struct CodeChunkResult {
  std::vector<Code> codes;  // indices unset; assigned during assembly
  std::vector<std::string> lints;
};

// Renders Prompt 1 for the chunk and parses the Themes array of the reply.
// More than max codes in the response -> ValidationError("overfull_response").
CodeChunkResult code_chunk(const corpus::Chunk& chunk, gateway::Gateway& gw,
                           const gateway::ModelConfig& model, const std::string& prompt_template,
                           const CodegenConfig& config);

// verified: verbatim substring after whitespace normalization; fuzzy:
// word-level LCS ratio >= threshold; else unverified.
Verification verify_quote(const std::string& quote, const corpus::Chunk& chunk, double threshold);

struct CodeCorpusResult {
  Codebook codebook;
  std::vector<std::string> lints;
  std::vector<std::string> failures;  // per-chunk errors
};

// Runs code_chunk over every chunk (concurrently under the gateway cap),
// assembles results in chunk order, assigns dense indices and verifies
// quotes. Fails when the failed-chunk fraction exceeds the configured cap.
CodeCorpusResult code_corpus(const std::vector<corpus::Chunk>& chunks, gateway::Gateway& gw,
                             const gateway::ModelConfig& model,
                             const std::string& prompt_template, const CodegenConfig& config,
                             const std::string& run_id);

// Index,Codes,Description,Quote plus provenance columns; reduced stages add MergedFrom.
std::string codebook_to_csv(const Codebook& book);
Codebook codebook_from_csv(std::string_view data);

// Multi-quote cells in the Quote column are joined with this separator.
inline constexpr const char* kQuoteSeparator = "\n---\n";

}  // namespace taforge::codegen
