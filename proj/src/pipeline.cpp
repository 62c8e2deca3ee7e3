#include "taforge/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>

#include "json.hpp"
#include "taforge/csv.hpp"
#include "taforge/errors.hpp"
#include "taforge/hash.hpp"
#include "taforge/themer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace taforge::pipeline {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::clean: return "clean";
    case Phase::chunk: return "chunk";
    case Phase::code: return "code";
    case Phase::reduce: return "reduce";
    case Phase::themes: return "themes";
    case Phase::review: return "review";
    case Phase::name: return "name";
    case Phase::compare: return "compare";
  }
  return "unknown";
}

Phase phase_from_name(const std::string& name) {
  for (Phase p : {Phase::clean, Phase::chunk, Phase::code, Phase::reduce, Phase::themes,
                  Phase::review, Phase::name, Phase::compare})
    if (name == phase_name(p)) return p;
  throw ValidationError("unknown phase: " + name);
}

namespace {

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw ValidationError("config: unknown key '" + key + "' in " + where);
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

RunConfig config_from_json(std::string_view data, const std::string& base_dir) {
  json j = json::parse(data, nullptr, false);
  if (j.is_discarded()) throw ValidationError("config: not valid JSON");
  require_keys(j, "top level",
               {"base_url", "api_key_env", "model", "temperature", "context_limit",
                "reserved_response_tokens", "parallelism", "input_dir", "runs_dir",
                "replay_store", "prompt_dir", "stopwords_file", "clean", "chunk", "code",
                "reduce", "themes", "review", "compare", "live"});

  RunConfig c;
  c.base_url = j.value("base_url", c.base_url);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  c.model = j.value("model", c.model);
  c.temperature = j.value("temperature", c.temperature);
  c.context_limit = j.value("context_limit", c.context_limit);
  c.reserved_response_tokens = j.value("reserved_response_tokens", c.reserved_response_tokens);
  c.parallelism = j.value("parallelism", c.parallelism);
  c.input_dir = resolve_path(j.value("input_dir", ""), base_dir);
  c.runs_dir = resolve_path(j.value("runs_dir", c.runs_dir), base_dir);
  c.replay_store = resolve_path(j.value("replay_store", ""), base_dir);
  c.prompt_dir = resolve_path(j.value("prompt_dir", ""), base_dir);
  c.stopwords_file = resolve_path(j.value("stopwords_file", ""), base_dir);

  if (j.contains("clean")) {
    require_keys(j["clean"], "clean", {"start_marker", "end_marker"});
    std::string start = j["clean"].value("start_marker", "");
    std::string end = j["clean"].value("end_marker", "");
    if (!start.empty()) c.clean.start_marker = start;
    if (!end.empty()) c.clean.end_marker = end;
  }
  if (j.contains("chunk")) {
    require_keys(j["chunk"], "chunk", {"target_tokens", "slack_fraction", "boundary", "estimator"});
    c.chunk.target_tokens = j["chunk"].value("target_tokens", c.chunk.target_tokens);
    c.chunk.slack_fraction = j["chunk"].value("slack_fraction", c.chunk.slack_fraction);
    std::string boundary = j["chunk"].value("boundary", "paragraph");
    if (boundary == "paragraph")
      c.chunk.boundary = corpus::ChunkConfig::Boundary::paragraph;
    else if (boundary == "sentence")
      c.chunk.boundary = corpus::ChunkConfig::Boundary::sentence;
    else
      throw ValidationError("config: chunk.boundary must be paragraph or sentence");
    if (j["chunk"].contains("estimator")) {
      const json& e = j["chunk"]["estimator"];
      require_keys(e, "chunk.estimator", {"mode", "words_per_token_factor", "plugin_name"});
      std::string mode = e.value("mode", "word_heuristic");
      if (mode == "word_heuristic")
        c.chunk.estimator.mode = corpus::TokenEstimatorConfig::Mode::word_heuristic;
      else if (mode == "plugin")
        c.chunk.estimator.mode = corpus::TokenEstimatorConfig::Mode::plugin;
      else
        throw ValidationError("config: estimator.mode must be word_heuristic or plugin");
      c.chunk.estimator.words_per_token_factor =
          e.value("words_per_token_factor", c.chunk.estimator.words_per_token_factor);
      c.chunk.estimator.plugin_name = e.value("plugin_name", "");
    }
  }
  if (j.contains("code")) {
    require_keys(j["code"], "code",
                 {"max_codes_per_chunk", "quote_fuzzy_threshold", "failure_fraction_cap"});
    c.code.max_codes_per_chunk = j["code"].value("max_codes_per_chunk", c.code.max_codes_per_chunk);
    c.code.quote_fuzzy_threshold =
        j["code"].value("quote_fuzzy_threshold", c.code.quote_fuzzy_threshold);
    c.code.failure_fraction_cap =
        j["code"].value("failure_fraction_cap", c.code.failure_fraction_cap);
  }
  if (j.contains("reduce")) {
    require_keys(j["reduce"], "reduce", {"max_quotes_per_code", "shorten_char_limit"});
    c.merge_policy.max_quotes_per_code =
        j["reduce"].value("max_quotes_per_code", c.merge_policy.max_quotes_per_code);
    c.shorten_char_limit = j["reduce"].value("shorten_char_limit", 0);
  }
  if (j.contains("themes")) {
    require_keys(j["themes"], "themes", {"n"});
    c.theme_count = j["themes"].value("n", c.theme_count);
  }
  if (j.contains("review")) {
    require_keys(j["review"], "review",
                 {"temperature", "k_runs", "tau", "include_baseline"});
    c.review.temperature = j["review"].value("temperature", c.review.temperature);
    c.review.k_runs = j["review"].value("k_runs", c.review.k_runs);
    c.review.tau = j["review"].value("tau", c.review.tau);
    c.review.include_baseline = j["review"].value("include_baseline", c.review.include_baseline);
  }
  if (j.contains("compare")) {
    require_keys(j["compare"], "compare", {"reference_file", "tau", "overrides_file"});
    c.reference_file = resolve_path(j["compare"].value("reference_file", ""), base_dir);
    c.overrides_file = resolve_path(j["compare"].value("overrides_file", ""), base_dir);
    c.compare_tau = j["compare"].value("tau", c.compare_tau);
  }
  if (j.contains("live")) {
    require_keys(j["live"], "live", {"max_retries", "backoff_ms", "timeout_seconds"});
    c.live.max_retries = j["live"].value("max_retries", c.live.max_retries);
    c.live.backoff_ms = j["live"].value("backoff_ms", c.live.backoff_ms);
    c.live.timeout_seconds = j["live"].value("timeout_seconds", c.live.timeout_seconds);
  }

  if (c.temperature < 0 || c.temperature > 2)
    throw ValidationError("config: temperature must be in [0, 2]");
  if (c.reserved_response_tokens >= c.context_limit)
    throw ValidationError("config: reserved_response_tokens must be below context_limit");
  double budget_cap = c.chunk.target_tokens * (1.0 + c.chunk.slack_fraction);
  if (budget_cap >= c.context_limit - c.reserved_response_tokens)
    throw ValidationError("config: chunk target x (1 + slack) must stay below context_limit - "
                          "reserved_response_tokens");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::string data = csv::read_file(path);
  return config_from_json(data, fs::path(path).parent_path().string());
}

std::string RunContext::run_dir() const {
  return (fs::path(config.runs_dir) / run_id).string();
}

std::string RunContext::artifact(const std::string& rel) const {
  return (fs::path(run_dir()) / rel).string();
}

const std::vector<std::string>& editable_artifacts() {
  // the declared human checkpoints between phases
  static const std::vector<std::string> list = {"reduce/codes.csv", "themes/themes.json"};
  return list;
}

namespace {

class PhaseLock {
 public:
  explicit PhaseLock(const std::string& run_dir) : path_(run_dir + "/.lock") {
    std::error_code ec;
    fs::create_directories(run_dir, ec);
    if (fs::exists(path_))
      throw ValidationError("run directory is locked (another phase running?): " + path_);
    std::ofstream out(path_);
    if (!out) throw ValidationError("cannot create lock file: " + path_);
  }
  ~PhaseLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }

 private:
  std::string path_;
};

struct GatewayBundle {
  std::shared_ptr<gateway::Gateway> gw;
  gateway::ModelConfig model;
  prompts::TemplateSet templates;
};

GatewayBundle build_gateway(const RunContext& ctx) {
  GatewayBundle bundle;
  const RunConfig& c = ctx.config;
  bundle.model.model_id = c.model;
  bundle.model.temperature = c.temperature;
  bundle.model.context_limit = c.context_limit;
  bundle.model.reserved_response_tokens = c.reserved_response_tokens;
  bundle.templates =
      c.prompt_dir.empty() ? prompts::TemplateSet::builtin()
                           : prompts::TemplateSet::from_directory(c.prompt_dir);

  std::shared_ptr<gateway::Backend> backend;
  if (ctx.backend == gateway::BackendKind::replay) {
    auto store = std::make_shared<gateway::ReplayStore>();
    if (c.replay_store.empty())
      throw ValidationError("replay backend requires replay_store in the config");
    store->load(c.replay_store);
    backend = std::make_shared<gateway::ReplayBackend>(store);
  } else {
    gateway::LiveConfig live = c.live;
    live.base_url = c.base_url;
    if (const char* key = std::getenv(c.api_key_env.c_str())) live.api_key = key;
    backend = std::make_shared<gateway::LiveBackend>(live);
  }

  gateway::GatewayConfig gc;
  gc.estimator = c.chunk.estimator;
  gc.parallelism_cap = c.parallelism;
  bundle.gw = std::make_shared<gateway::Gateway>(backend, gc);
  bundle.gw->set_audit_log(std::make_shared<gateway::AuditLog>(ctx.artifact("audit.jsonl")));
  if (ctx.record && ctx.backend == gateway::BackendKind::live) {
    if (c.replay_store.empty())
      throw ValidationError("--record requires replay_store in the config");
    auto store = std::make_shared<gateway::ReplayStore>();
    store->attach_file(c.replay_store);
    bundle.gw->set_record_store(store);
  }
  return bundle;
}

void require_artifact(const RunContext& ctx, const std::string& rel, const char* producer) {
  if (!fs::exists(ctx.artifact(rel)))
    throw ValidationError("missing prerequisite artifact " + rel + "; run phase '" +
                          std::string(producer) + "' first");
}

void write_artifact(const RunContext& ctx, PhaseOutcome& outcome, const std::string& rel,
                    std::string_view data) {
  std::string path = ctx.artifact(rel);
  fs::create_directories(fs::path(path).parent_path());
  csv::write_file(path, data);
  outcome.artifacts[rel] = hash_hex(data);
}

std::set<std::string> stopwords_for(const RunConfig& c) {
  if (c.stopwords_file.empty()) return reviewer::default_stopwords();
  std::set<std::string> words;
  std::ifstream in(c.stopwords_file);
  if (!in) throw ValidationError("cannot read stopwords file: " + c.stopwords_file);
  std::string word;
  while (in >> word) words.insert(word);
  return words;
}

codegen::Codebook load_codebook(const RunContext& ctx, const std::string& rel) {
  return codegen::codebook_from_csv(csv::read_file(ctx.artifact(rel)));
}

void phase_clean(const RunContext& ctx, PhaseOutcome& outcome) {
  if (ctx.config.input_dir.empty())
    throw ValidationError("config: input_dir is required for the clean phase");
  corpus::LoadResult loaded = corpus::load_and_clean(ctx.config.input_dir, ctx.config.clean);
  if (loaded.documents.empty())
    throw ValidationError("clean: no usable documents in " + ctx.config.input_dir);
  for (const auto& doc : loaded.documents)
    write_artifact(ctx, outcome, "clean/" + doc.id + ".txt", doc.text);
  outcome.notes = loaded.issues;
}

void phase_chunk(const RunContext& ctx, PhaseOutcome& outcome) {
  std::string clean_dir = ctx.artifact("clean");
  if (!fs::is_directory(clean_dir))
    throw ValidationError("missing prerequisite artifact clean/; run phase 'clean' first");
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(clean_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw ValidationError("chunk: no cleaned documents found");

  std::vector<corpus::Chunk> all;
  for (const auto& path : paths) {
    corpus::Document doc{path.stem().string(), csv::read_file(path.string()), path.string()};
    corpus::ChunkResult result = corpus::chunk(doc, ctx.config.chunk);
    for (auto& w : result.warnings) outcome.notes.push_back(std::move(w));
    for (auto& c : result.chunks) all.push_back(std::move(c));
  }
  write_artifact(ctx, outcome, "chunk/chunks.csv", corpus::chunks_to_csv(all));
}

void phase_code(const RunContext& ctx, PhaseOutcome& outcome) {
  require_artifact(ctx, "chunk/chunks.csv", "chunk");
  auto chunks = corpus::chunks_from_csv(csv::read_file(ctx.artifact("chunk/chunks.csv")));
  GatewayBundle g = build_gateway(ctx);
  codegen::CodeCorpusResult result = codegen::code_corpus(
      chunks, *g.gw, g.model, g.templates.initial_coding, ctx.config.code, ctx.run_id);
  write_artifact(ctx, outcome, "code/codes.csv", codegen::codebook_to_csv(result.codebook));

  int unverified = 0, fuzzy = 0;
  for (const auto& code : result.codebook.codes) {
    if (code.quote_verified == codegen::Verification::unverified) ++unverified;
    if (code.quote_verified == codegen::Verification::fuzzy) ++fuzzy;
  }
  json summary{{"codes", result.codebook.codes.size()},
               {"chunks", chunks.size()},
               {"failed_chunks", result.failures},
               {"lints", result.lints},
               {"quotes_fuzzy", fuzzy},
               {"quotes_unverified", unverified}};
  write_artifact(ctx, outcome, "code/summary.json", summary.dump(2) + "\n");
  for (const auto& f : result.failures) outcome.notes.push_back("failed: " + f);
  for (const auto& l : result.lints) outcome.notes.push_back(l);
}

void phase_reduce(const RunContext& ctx, PhaseOutcome& outcome) {
  require_artifact(ctx, "code/codes.csv", "code");
  codegen::Codebook raw = load_codebook(ctx, "code/codes.csv");
  GatewayBundle g = build_gateway(ctx);
  reducer::ReduceResult groups = reducer::reduce(raw, *g.gw, g.model, g.templates.dedup);
  reducer::MergeResult merged = reducer::merge(raw, groups.groups, ctx.config.merge_policy);

  codegen::Codebook out = ctx.config.shorten_char_limit > 0
                              ? reducer::shorten_descriptions(merged.codebook,
                                                              ctx.config.shorten_char_limit)
                              : merged.codebook;
  write_artifact(ctx, outcome, "reduce/codes.csv", codegen::codebook_to_csv(out));
  write_artifact(ctx, outcome, "reduce/groups.json", reducer::groups_to_json(groups));
  csv::Table mapping;
  mapping.header = {"OldIndex", "NewIndex"};
  for (const auto& [from, to] : merged.index_mapping)
    mapping.rows.push_back({std::to_string(from), std::to_string(to)});
  write_artifact(ctx, outcome, "reduce/index_map.csv", csv::serialize(mapping));
  outcome.notes = groups.warnings;
}

void phase_themes(const RunContext& ctx, PhaseOutcome& outcome) {
  require_artifact(ctx, "reduce/codes.csv", "reduce");
  codegen::Codebook reduced = load_codebook(ctx, "reduce/codes.csv");
  GatewayBundle g = build_gateway(ctx);
  themer::ThemeSet set =
      themer::generate_themes(reduced, ctx.config.theme_count, *g.gw, g.model, g.templates.theming);
  write_artifact(ctx, outcome, "themes/themes.json", themer::themeset_to_json(set));
  outcome.notes = set.warnings;
}

void phase_review(const RunContext& ctx, PhaseOutcome& outcome) {
  require_artifact(ctx, "reduce/codes.csv", "reduce");
  require_artifact(ctx, "themes/themes.json", "themes");
  codegen::Codebook reduced = load_codebook(ctx, "reduce/codes.csv");
  themer::ThemeSet baseline =
      themer::themeset_from_json(csv::read_file(ctx.artifact("themes/themes.json")));

  reviewer::SweepConfig sweep_config = ctx.config.review;
  sweep_config.n = ctx.config.theme_count;
  GatewayBundle g = build_gateway(ctx);
  reviewer::SweepResult swept =
      reviewer::sweep(reduced, sweep_config, *g.gw, g.model, g.templates.theming);
  for (const auto& f : swept.failures) outcome.notes.push_back(f);

  std::optional<themer::ThemeSet> base;
  if (sweep_config.include_baseline) base = baseline;
  std::set<std::string> stopwords = stopwords_for(ctx.config);
  reviewer::StabilityReport report =
      reviewer::cluster_and_score(swept.sets, base, sweep_config.tau, stopwords);

  json sets = json::array();
  for (const auto& s : swept.sets) sets.push_back(json::parse(themer::themeset_to_json(s)));
  write_artifact(ctx, outcome, "review/sweep_sets.json", sets.dump(2) + "\n");
  write_artifact(ctx, outcome, "review/stability.json", reviewer::stability_to_json(report));
  write_artifact(ctx, outcome, "review/stability.md", reviewer::stability_to_markdown(report));
}

void phase_name(const RunContext& ctx, PhaseOutcome& outcome) {
  require_artifact(ctx, "reduce/codes.csv", "reduce");
  require_artifact(ctx, "themes/themes.json", "themes");
  codegen::Codebook reduced = load_codebook(ctx, "reduce/codes.csv");
  themer::ThemeSet set =
      themer::themeset_from_json(csv::read_file(ctx.artifact("themes/themes.json")));
  GatewayBundle g = build_gateway(ctx);

  std::vector<std::future<themer::NamedSummary>> futures;
  for (const auto& theme : set.themes)
    futures.push_back(std::async(std::launch::async, [&, &theme = theme] {
      return themer::name_theme(theme, reduced, *g.gw, g.model, g.templates.naming);
    }));
  std::vector<themer::NamedSummary> summaries;
  for (auto& f : futures) summaries.push_back(f.get());
  for (const auto& s : summaries)
    for (const auto& lint : s.lints) outcome.notes.push_back(lint);
  write_artifact(ctx, outcome, "name/named_themes.json",
                 themer::named_summaries_to_json(summaries));
}

void phase_compare(const RunContext& ctx, PhaseOutcome& outcome) {
  require_artifact(ctx, "reduce/codes.csv", "reduce");
  require_artifact(ctx, "themes/themes.json", "themes");
  require_artifact(ctx, "review/sweep_sets.json", "review");
  if (ctx.config.reference_file.empty())
    throw ValidationError("config: compare.reference_file is required for the compare phase");

  codegen::Codebook reduced = load_codebook(ctx, "reduce/codes.csv");
  themer::ThemeSet phase3 =
      themer::themeset_from_json(csv::read_file(ctx.artifact("themes/themes.json")));
  reviewer::StabilityReport phase4;
  for (const auto& s : json::parse(csv::read_file(ctx.artifact("review/sweep_sets.json"))))
    phase4.sweep_sets.push_back(themer::themeset_from_json(s.dump()));
  auto reference = evaluator::reference_from_json(csv::read_file(ctx.config.reference_file));

  auto records =
      evaluator::match_themes(phase3, phase4, reference, reduced, ctx.config.compare_tau);
  if (!ctx.config.overrides_file.empty()) {
    json j = json::parse(csv::read_file(ctx.config.overrides_file));
    std::map<std::string, std::string> overrides;
    for (const auto& [k, v] : j.items()) overrides[k] = v.get<std::string>();
    evaluator::apply_overrides(records, overrides);
  }
  evaluator::ComparisonReport report =
      evaluator::build_report(records, reference, phase3, ctx.config.compare_tau);
  write_artifact(ctx, outcome, "compare/comparison.md", report.markdown);
  write_artifact(ctx, outcome, "compare/comparison.csv", report.csv);

  json recs = json::array();
  for (const auto& r : records) {
    json hits = json::array();
    for (const auto& h : r.code_hits)
      hits.push_back({{"index", h.index},
                      {"name", h.name},
                      {"keyword", h.matched_keyword},
                      {"field", h.field}});
    recs.push_back({{"ref_id", r.ref_id},
                    {"verdict", evaluator::verdict_name(r.verdict)},
                    {"best_phase3_theme", r.best_phase3_theme},
                    {"best_phase3_score", r.best_phase3_score},
                    {"best_phase4_run", r.best_phase4_run},
                    {"best_phase4_theme", r.best_phase4_theme},
                    {"best_phase4_score", r.best_phase4_score},
                    {"code_hits", hits},
                    {"human_verdict", r.human_verdict.value_or("")}});
  }
  write_artifact(ctx, outcome, "compare/records.json", recs.dump(2) + "\n");
}

void append_manifest(const RunContext& ctx, Phase phase, const PhaseOutcome& outcome) {
  prompts::TemplateSet templates =
      ctx.config.prompt_dir.empty() ? prompts::TemplateSet::builtin()
                                    : prompts::TemplateSet::from_directory(ctx.config.prompt_dir);
  json entry{
      {"run_id", ctx.run_id},
      {"phase", phase_name(phase)},
      {"timestamp", std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::system_clock::now().time_since_epoch())
                        .count()},
      {"backend", ctx.backend == gateway::BackendKind::live ? "live" : "replay"},
      {"model", ctx.config.model},
      {"temperature", ctx.config.temperature},
      {"sweep_temperature", ctx.config.review.temperature},
      {"config_hash", ctx.config_hash},
      {"prompt_hashes",
       {{"initial_coding", templates.hash_of("initial_coding")},
        {"dedup", templates.hash_of("dedup")},
        {"theming", templates.hash_of("theming")},
        {"naming", templates.hash_of("naming")}}},
      {"artifacts", outcome.artifacts},
      {"notes", outcome.notes}};
  std::ofstream out(ctx.artifact("manifest.jsonl"), std::ios::app);
  if (!out) throw ValidationError("cannot append manifest for run " + ctx.run_id);
  out << entry.dump() << "\n";
}

}  // namespace

PhaseOutcome run_phase(const RunContext& ctx, Phase phase) {
  PhaseLock lock(ctx.run_dir());
  PhaseOutcome outcome;
  switch (phase) {
    case Phase::clean: phase_clean(ctx, outcome); break;
    case Phase::chunk: phase_chunk(ctx, outcome); break;
    case Phase::code: phase_code(ctx, outcome); break;
    case Phase::reduce: phase_reduce(ctx, outcome); break;
    case Phase::themes: phase_themes(ctx, outcome); break;
    case Phase::review: phase_review(ctx, outcome); break;
    case Phase::name: phase_name(ctx, outcome); break;
    case Phase::compare: phase_compare(ctx, outcome); break;
  }
  append_manifest(ctx, phase, outcome);
  return outcome;
}

VerifyReport verify_manifest(const RunContext& ctx) {
  std::string manifest_path = ctx.artifact("manifest.jsonl");
  std::ifstream in(manifest_path);
  if (!in) throw ValidationError("no manifest for run " + ctx.run_id + " at " + manifest_path);

  // the latest recorded hash wins per artifact
  std::map<std::string, std::string> expected;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json entry = json::parse(line);
    for (const auto& [rel, hash] : entry.at("artifacts").items())
      expected[rel] = hash.get<std::string>();
  }

  const auto& editable = editable_artifacts();
  VerifyReport report;
  for (const auto& [rel, hash] : expected) {
    std::string path = ctx.artifact(rel);
    if (!fs::exists(path)) {
      report.missing.push_back(rel);
      continue;
    }
    std::string actual = hash_file(path);
    if (actual == hash) {
      report.ok.push_back(rel);
    } else if (std::find(editable.begin(), editable.end(), rel) != editable.end()) {
      report.edited.push_back(rel);
    } else {
      report.drifted.push_back(rel);
    }
  }
  return report;
}

}  // namespace taforge::pipeline
