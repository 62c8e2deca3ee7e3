#include "taforge/codegen.hpp"

#include <future>

#include "json.hpp"
#include "taforge/csv.hpp"
#include "taforge/errors.hpp"
#include "taforge/prompts.hpp"
#include "taforge/text.hpp"

using nlohmann::json;

namespace taforge::codegen {

const char* verification_name(Verification v) {
  switch (v) {
    case Verification::verified: return "verified";
    case Verification::fuzzy: return "fuzzy";
    case Verification::unverified: return "unverified";
  }
  return "unverified";
}

Verification verification_from_name(const std::string& name) {
  if (name == "verified") return Verification::verified;
  if (name == "fuzzy") return Verification::fuzzy;
  if (name == "unverified") return Verification::unverified;
  throw ValidationError("unknown verification status: " + name);
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::raw: return "raw";
    case Stage::reduced: return "reduced";
    case Stage::shortened: return "shortened";
  }
  return "raw";
}

std::string extract_json_object(const std::string& raw) {
  json direct = json::parse(raw, nullptr, false);
  if (!direct.is_discarded()) return raw;
  auto first = raw.find('{');
  auto last = raw.rfind('}');
  if (first == std::string::npos || last == std::string::npos || last <= first)
    throw ValidationError("malformed_response: no JSON object found in: " + raw);
  std::string span = raw.substr(first, last - first + 1);
  json recovered = json::parse(span, nullptr, false);
  if (recovered.is_discarded())
    throw ValidationError("malformed_response: unparseable JSON in: " + raw);
  return span;
}

namespace {

std::string get_field(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* key : keys)
    if (obj.contains(key) && obj[key].is_string()) return obj[key].get<std::string>();
  return {};
}

}  // namespace

CodeChunkResult code_chunk(const corpus::Chunk& chunk, gateway::Gateway& gw,
                           const gateway::ModelConfig& model, const std::string& prompt_template,
                           const CodegenConfig& config) {
  gateway::ChatRequest req;
  req.config = model;
  req.purpose = gateway::Purpose::initial_coding;
  req.messages.push_back(
      {"user", prompts::render(prompt_template,
                               {{"max_codes", std::to_string(config.max_codes_per_chunk)},
                                {"text", chunk.text}})});
  gateway::ChatResponse resp = gw.complete(req);

  json parsed = json::parse(extract_json_object(resp.content));
  if (!parsed.contains("Themes") || !parsed["Themes"].is_array())
    throw ValidationError("malformed_response: missing 'Themes' array in: " + resp.content);
  const json& themes = parsed["Themes"];
  if (static_cast<int>(themes.size()) > config.max_codes_per_chunk)
    throw ValidationError("overfull_response: " + std::to_string(themes.size()) +
                          " themes, requested at most " +
                          std::to_string(config.max_codes_per_chunk));

  CodeChunkResult result;
  for (const auto& t : themes) {
    Code code;
    code.name = get_field(t, {"name", "Name", "theme", "Theme"});
    code.description = get_field(t, {"description", "Description"});
    std::string quote = get_field(t, {"quote", "Quote"});
    code.source_chunk = chunk.file_name;
    if (code.name.empty() || code.description.empty() || quote.empty())
      throw ValidationError("malformed_response: theme entry missing name/description/quote in: " +
                            resp.content);
    if (text::count_words(code.name) > 3)
      result.lints.push_back("code name over 3 words: \"" + code.name + "\" (" +
                             chunk.file_name + ")");
    if (static_cast<int>(text::count_words(quote)) > config.quote_line_cap_words)
      result.lints.push_back("quote over line cap in " + chunk.file_name + " for code \"" +
                             code.name + "\"");
    code.quotes.push_back(std::move(quote));
    result.codes.push_back(std::move(code));
  }
  return result;
}

Verification verify_quote(const std::string& quote, const corpus::Chunk& chunk,
                          double threshold) {
  std::string nq = text::normalize_ws(quote);
  std::string nc = text::normalize_ws(chunk.text);
  if (!nq.empty() && nc.find(nq) != std::string::npos) return Verification::verified;
  if (text::lcs_word_ratio(nq, nc) >= threshold) return Verification::fuzzy;
  return Verification::unverified;
}

CodeCorpusResult code_corpus(const std::vector<corpus::Chunk>& chunks, gateway::Gateway& gw,
                             const gateway::ModelConfig& model,
                             const std::string& prompt_template, const CodegenConfig& config,
                             const std::string& run_id) {
  CodeCorpusResult result;
  result.codebook.provenance = run_id;
  result.codebook.stage = Stage::raw;
  if (chunks.empty()) {
    result.lints.push_back("no chunks: emitting empty codebook");
    return result;
  }

  // Launch per-chunk; the gateway's semaphore bounds real concurrency.
  std::vector<std::future<CodeChunkResult>> futures;
  futures.reserve(chunks.size());
  for (const auto& chunk : chunks)
    futures.push_back(std::async(std::launch::async, [&, &chunk = chunk] {
      return code_chunk(chunk, gw, model, prompt_template, config);
    }));

  // Assembly strictly in chunk order, independent of completion order.
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    try {
      CodeChunkResult chunk_result = futures[i].get();
      for (auto& code : chunk_result.codes) {
        code.index = static_cast<int>(result.codebook.codes.size());
        code.quote_verified =
            verify_quote(code.quotes.front(), chunks[i], config.quote_fuzzy_threshold);
        result.codebook.codes.push_back(std::move(code));
      }
      for (auto& lint : chunk_result.lints) result.lints.push_back(std::move(lint));
    } catch (const HallucinationError&) {
      throw;
    } catch (const Error& e) {
      result.failures.push_back(chunks[i].file_name + ": " + e.what());
    }
  }

  double failure_fraction =
      static_cast<double>(result.failures.size()) / static_cast<double>(chunks.size());
  if (failure_fraction > config.failure_fraction_cap) {
    std::string detail;
    for (const auto& f : result.failures) detail += "\n  " + f;
    throw ValidationError("initial coding failed for " + std::to_string(result.failures.size()) +
                          "/" + std::to_string(chunks.size()) + " chunks (cap " +
                          std::to_string(config.failure_fraction_cap) + "):" + detail);
  }
  return result;
}

namespace {

std::string join_quotes(const std::vector<std::string>& quotes) {
  std::string out;
  for (std::size_t i = 0; i < quotes.size(); ++i) {
    if (i) out += kQuoteSeparator;
    out += quotes[i];
  }
  return out;
}

std::vector<std::string> split_quotes(const std::string& cell) {
  std::vector<std::string> quotes;
  const std::string sep = kQuoteSeparator;
  std::size_t start = 0;
  while (true) {
    auto pos = cell.find(sep, start);
    if (pos == std::string::npos) break;
    quotes.push_back(cell.substr(start, pos - start));
    start = pos + sep.size();
  }
  quotes.push_back(cell.substr(start));
  return quotes;
}

std::string join_indices(const std::vector<int>& indices) {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(indices[i]);
  }
  return out;
}

std::vector<int> split_indices(const std::string& cell) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < cell.size()) {
    while (i < cell.size() && cell[i] == ' ') ++i;
    std::size_t start = i;
    while (i < cell.size() && cell[i] != ' ') ++i;
    if (i > start) out.push_back(std::stoi(cell.substr(start, i - start)));
  }
  return out;
}

}  // namespace

std::string codebook_to_csv(const Codebook& book) {
  const bool reduced = book.stage != Stage::raw;
  csv::Table table;
  table.header = {"Index", "Codes", "Description", "Quote", "SourceChunk", "QuoteVerified"};
  if (reduced) table.header.push_back("MergedFrom");
  table.header.insert(table.header.end(), {"Stage", "Provenance"});
  for (const auto& code : book.codes) {
    std::vector<std::string> row = {std::to_string(code.index),
                                    code.name,
                                    code.description,
                                    join_quotes(code.quotes),
                                    code.source_chunk,
                                    verification_name(code.quote_verified)};
    if (reduced) row.push_back(join_indices(code.merged_from));
    row.push_back(stage_name(book.stage));
    row.push_back(book.provenance);
    table.rows.push_back(std::move(row));
  }
  return csv::serialize(table);
}

Codebook codebook_from_csv(std::string_view data) {
  csv::Table table = csv::parse(data);
  bool reduced;
  const std::vector<std::string> raw_header = {"Index",       "Codes", "Description",
                                               "Quote",       "SourceChunk",
                                               "QuoteVerified", "Stage", "Provenance"};
  const std::vector<std::string> reduced_header = {"Index",         "Codes",      "Description",
                                                   "Quote",         "SourceChunk",
                                                   "QuoteVerified", "MergedFrom", "Stage",
                                                   "Provenance"};
  if (table.header == raw_header)
    reduced = false;
  else if (table.header == reduced_header)
    reduced = true;
  else
    throw ValidationError("codes csv: unexpected header");

  Codebook book;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    Code code;
    try {
      code.index = std::stoi(row[0]);
      code.name = row[1];
      code.description = row[2];
      code.quotes = split_quotes(row[3]);
      code.source_chunk = row[4];
      code.quote_verified = verification_from_name(row[5]);
      if (reduced) code.merged_from = split_indices(row[6]);
      const std::string& stage = row[reduced ? 7 : 6];
      const std::string& prov = row[reduced ? 8 : 7];
      if (i == 0) {
        if (stage == "raw") book.stage = Stage::raw;
        else if (stage == "reduced") book.stage = Stage::reduced;
        else if (stage == "shortened") book.stage = Stage::shortened;
        else throw ValidationError("unknown stage: " + stage);
        book.provenance = prov;
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError("codes csv: malformed row " + std::to_string(i + 2));
    }
    book.codes.push_back(std::move(code));
  }
  return book;
}

}  // namespace taforge::codegen
