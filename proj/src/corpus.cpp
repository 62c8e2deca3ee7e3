#include "taforge/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>

#include "taforge/csv.hpp"
#include "taforge/errors.hpp"
#include "taforge/text.hpp"

namespace fs = std::filesystem;

namespace taforge::corpus {

namespace {

std::map<std::string, TokenEstimator>& estimator_registry() {
  static std::map<std::string, TokenEstimator> registry;
  return registry;
}
std::mutex registry_mutex;

}  // namespace

void register_token_estimator(const std::string& name, TokenEstimator fn) {
  std::lock_guard lock(registry_mutex);
  estimator_registry()[name] = std::move(fn);
}

int estimate_tokens(std::string_view text_in, const TokenEstimatorConfig& config) {
  if (config.mode == TokenEstimatorConfig::Mode::plugin) {
    std::lock_guard lock(registry_mutex);
    auto it = estimator_registry().find(config.plugin_name);
    if (it == estimator_registry().end())
      throw ValidationError("token estimator plugin not registered: " + config.plugin_name);
    return it->second(text_in);
  }
  if (!(config.words_per_token_factor > 0) || !std::isfinite(config.words_per_token_factor))
    throw ValidationError("words_per_token_factor must be a finite positive number");
  std::size_t words = text::count_words(text_in);
  return static_cast<int>(
      std::ceil(static_cast<double>(words) * config.words_per_token_factor));
}

std::string clean_text(std::string_view raw, const CleanConfig& config) {
  std::string s = text::normalize_newlines(raw);
  if (config.start_marker && !config.start_marker->empty()) {
    auto pos = s.find(*config.start_marker);
    if (pos != std::string::npos) s.erase(0, pos);
  }
  if (config.end_marker && !config.end_marker->empty()) {
    auto pos = s.rfind(*config.end_marker);
    if (pos != std::string::npos) s.erase(pos + config.end_marker->size());
  }
  return text::collapse_blank_lines(s);
}

LoadResult load_and_clean(const std::string& dir, const CleanConfig& config) {
  LoadResult result;
  if (!fs::is_directory(dir)) throw ValidationError("not a directory: " + dir);
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    std::string raw;
    try {
      raw = csv::read_file(path.string());
    } catch (const Error& e) {
      result.issues.push_back(std::string("unreadable: ") + e.what());
      continue;
    }
    std::string cleaned = clean_text(raw, config);
    if (text::count_words(cleaned) == 0) {
      result.issues.push_back("rejected (empty after cleaning): " + path.string());
      continue;
    }
    result.documents.push_back({path.stem().string(), std::move(cleaned), path.string()});
  }
  return result;
}

ChunkResult chunk(const Document& doc, const ChunkConfig& config) {
  if (config.target_tokens <= 0) throw ValidationError("target_tokens must be positive");
  if (config.slack_fraction < 0 || config.slack_fraction > 0.25)
    throw ValidationError("slack_fraction must be in [0, 0.25]");

  const double cap =
      static_cast<double>(config.target_tokens) * (1.0 + config.slack_fraction);
  std::vector<std::string> units = config.boundary == ChunkConfig::Boundary::paragraph
                                       ? text::split_paragraph_units(doc.text)
                                       : text::split_sentence_units(doc.text);

  ChunkResult result;
  auto flush = [&](std::string&& body) {
    if (body.empty()) return;
    int tokens = estimate_tokens(body, config.estimator);
    int ordinal = static_cast<int>(result.chunks.size());
    Chunk c;
    c.file_name = "part_" + std::to_string(ordinal) + "_" + doc.id + ".txt";
    c.text = std::move(body);
    c.tokens = tokens;
    c.doc_id = doc.id;
    c.ordinal = ordinal;
    if (static_cast<double>(tokens) > cap)
      result.warnings.push_back("oversized chunk " + c.file_name + " (" +
                                std::to_string(tokens) + " tokens, cap " +
                                std::to_string(static_cast<int>(cap)) + ")");
    result.chunks.push_back(std::move(c));
  };

  std::string current;
  for (const auto& unit : units) {
    std::string tentative = current + unit;
    if (!current.empty() &&
        static_cast<double>(estimate_tokens(tentative, config.estimator)) > cap) {
      flush(std::move(current));
      current = unit;
    } else {
      current = std::move(tentative);
    }
  }
  flush(std::move(current));
  return result;
}

std::string chunks_to_csv(const std::vector<Chunk>& chunks) {
  if (chunks.empty()) throw ValidationError("refusing to write empty chunk list");
  csv::Table table;
  table.header = {"FileName", "Interview_chunk", "Tokens", "DocId", "Ordinal"};
  for (const auto& c : chunks)
    table.rows.push_back(
        {c.file_name, c.text, std::to_string(c.tokens), c.doc_id, std::to_string(c.ordinal)});
  return csv::serialize(table);
}

std::vector<Chunk> chunks_from_csv(std::string_view data) {
  csv::Table table = csv::parse(data);
  const std::vector<std::string> expected = {"FileName", "Interview_chunk", "Tokens", "DocId",
                                             "Ordinal"};
  if (table.header != expected)
    throw ValidationError("chunks csv: unexpected header");
  std::vector<Chunk> chunks;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    Chunk c;
    c.file_name = row[0];
    c.text = row[1];
    try {
      c.tokens = std::stoi(row[2]);
      c.ordinal = std::stoi(row[4]);
    } catch (const std::exception&) {
      throw ValidationError("chunks csv: malformed row " + std::to_string(i + 2));
    }
    c.doc_id = row[3];
    chunks.push_back(std::move(c));
  }
  return chunks;
}

std::vector<std::string> check_token_column(const std::vector<Chunk>& chunks,
                                            const TokenEstimatorConfig& config) {
  std::vector<std::string> warnings;
  for (const auto& c : chunks) {
    int recomputed = estimate_tokens(c.text, config);
    if (recomputed != c.tokens)
      warnings.push_back("token mismatch for " + c.file_name + ": stored " +
                         std::to_string(c.tokens) + ", recomputed " +
                         std::to_string(recomputed));
  }
  return warnings;
}

}  // namespace taforge::corpus
