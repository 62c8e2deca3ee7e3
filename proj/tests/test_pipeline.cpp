#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "taforge/csv.hpp"
#include "taforge/errors.hpp"
#include "taforge/fixtures.hpp"
#include "taforge/hash.hpp"
#include "taforge/pipeline.hpp"

using namespace taforge;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Workspace {
  fs::path root;
  fixtures::DatasetShape shape = fixtures::interviews_shape();
  fixtures::BuildResult built;

  Workspace() {
    root = fs::temp_directory_path() / "taforge_pipeline_ws";
    fs::remove_all(root);
    fs::create_directories(root);
    built = fixtures::build_dataset((root / "fixtures").string(), shape);
  }
};

const Workspace& workspace() {
  static Workspace ws;
  return ws;
}

pipeline::RunContext make_context(const std::string& run_id,
                                  const std::string& replay_override = "",
                                  const std::string& runs_subdir = "runs") {
  const Workspace& ws = workspace();
  std::string config = fixtures::run_config_json(
      ws.shape, ws.built.corpus_dir,
      replay_override.empty() ? ws.built.replay_path : replay_override,
      ws.built.reference_path, (ws.root / runs_subdir).string(), 2);
  pipeline::RunContext ctx;
  ctx.config = pipeline::config_from_json(config, ws.root.string());
  ctx.config_hash = hash_hex(config);
  ctx.run_id = run_id;
  ctx.backend = gateway::BackendKind::replay;
  return ctx;
}

void run_all(const pipeline::RunContext& ctx) {
  for (pipeline::Phase p :
       {pipeline::Phase::clean, pipeline::Phase::chunk, pipeline::Phase::code,
        pipeline::Phase::reduce, pipeline::Phase::themes, pipeline::Phase::review,
        pipeline::Phase::name, pipeline::Phase::compare})
    pipeline::run_phase(ctx, p);
}

}  // namespace

TEST_CASE("config parsing is strict about unknown keys") {
  CHECK_THROWS_AS(pipeline::config_from_json("{\"modle\": \"x\"}", "."), ValidationError);
  CHECK_THROWS_AS(pipeline::config_from_json("{\"chunk\": {\"target\": 10}}", "."),
                  ValidationError);
  CHECK_THROWS_AS(pipeline::config_from_json("not json", "."), ValidationError);
  CHECK_THROWS_AS(pipeline::config_from_json("{\"temperature\": 3.0}", "."), ValidationError);
  CHECK_THROWS_AS(
      pipeline::config_from_json("{\"context_limit\": 100, \"reserved_response_tokens\": 100}",
                                 "."),
      ValidationError);
  CHECK_THROWS_AS(pipeline::config_from_json("{\"chunk\": {\"boundary\": \"page\"}}", "."),
                  ValidationError);
}

TEST_CASE("config defaults and relative path resolution") {
  auto c = pipeline::config_from_json("{\"input_dir\": \"corpus\", \"runs_dir\": \"out/runs\"}",
                                      "/base/dir");
  CHECK(c.model == "gpt-3.5-turbo");
  CHECK(c.temperature == 0.0);
  CHECK(c.context_limit == 4097);
  CHECK(c.reserved_response_tokens == 1000);
  CHECK(c.chunk.target_tokens == 2500);
  CHECK(c.review.tau == doctest::Approx(0.35));
  CHECK(c.input_dir == "/base/dir/corpus");
  CHECK(c.runs_dir == "/base/dir/out/runs");
  auto abs = pipeline::config_from_json("{\"input_dir\": \"/abs/corpus\"}", "/base/dir");
  CHECK(abs.input_dir == "/abs/corpus");
}

TEST_CASE("api keys come from the environment, never the config") {
  CHECK_THROWS_AS(pipeline::config_from_json("{\"api_key\": \"sk-secret\"}", "."),
                  ValidationError);
  auto c = pipeline::config_from_json("{\"api_key_env\": \"MY_KEY_VAR\"}", ".");
  CHECK(c.api_key_env == "MY_KEY_VAR");
}

TEST_CASE("phases refuse to run before their prerequisites") {
  auto ctx = make_context("order-check");
  fs::remove_all(ctx.run_dir());
  CHECK_THROWS_WITH_AS(pipeline::run_phase(ctx, pipeline::Phase::code),
                       doctest::Contains("chunk"), ValidationError);
  CHECK_THROWS_AS(pipeline::run_phase(ctx, pipeline::Phase::reduce), ValidationError);
  CHECK_THROWS_AS(pipeline::run_phase(ctx, pipeline::Phase::compare), ValidationError);
}

TEST_CASE("full replay pipeline produces the scripted shape") {
  auto ctx = make_context("full");
  fs::remove_all(ctx.run_dir());
  run_all(ctx);

  auto chunks = corpus::chunks_from_csv(csv::read_file(ctx.artifact("chunk/chunks.csv")));
  CHECK(static_cast<int>(chunks.size()) == workspace().shape.expected_chunks);

  auto raw = codegen::codebook_from_csv(csv::read_file(ctx.artifact("code/codes.csv")));
  CHECK(static_cast<int>(raw.codes.size()) == workspace().shape.raw_codes);
  CHECK(raw.stage == codegen::Stage::raw);
  for (const auto& code : raw.codes)
    CHECK(code.quote_verified == codegen::Verification::verified);

  auto reduced = codegen::codebook_from_csv(csv::read_file(ctx.artifact("reduce/codes.csv")));
  CHECK(static_cast<int>(reduced.codes.size()) == workspace().shape.reduced_codes);
  CHECK(reduced.stage == codegen::Stage::reduced);

  auto themes = themer::themeset_from_json(csv::read_file(ctx.artifact("themes/themes.json")));
  CHECK(static_cast<int>(themes.themes.size()) == workspace().shape.theme_count);

  json stability = json::parse(csv::read_file(ctx.artifact("review/stability.json")));
  CHECK(stability.contains("clusters"));

  json records = json::parse(csv::read_file(ctx.artifact("compare/records.json")));
  REQUIRE(records.size() == 3);
  for (const auto& r : records) CHECK(r["verdict"] == "phase3");

  auto named =
      themer::named_summaries_from_json(csv::read_file(ctx.artifact("name/named_themes.json")));
  CHECK(static_cast<int>(named.size()) == workspace().shape.theme_count);

  CHECK(fs::exists(ctx.artifact("manifest.jsonl")));
  CHECK(fs::exists(ctx.artifact("audit.jsonl")));

  auto verify = pipeline::verify_manifest(ctx);
  CHECK(verify.clean());
  CHECK(verify.edited.empty());
  CHECK_FALSE(verify.ok.empty());
}

TEST_CASE("verify distinguishes edits to declared checkpoints from drift") {
  auto ctx = make_context("verify-drift");
  fs::remove_all(ctx.run_dir());
  run_all(ctx);

  // themes.json is a declared human checkpoint
  {
    std::string data = csv::read_file(ctx.artifact("themes/themes.json"));
    std::ofstream(ctx.artifact("themes/themes.json")) << data << "\n";
  }
  auto after_edit = pipeline::verify_manifest(ctx);
  CHECK(after_edit.clean());
  CHECK(after_edit.edited == std::vector<std::string>{"themes/themes.json"});

  // chunks.csv is not editable: drift
  {
    std::string data = csv::read_file(ctx.artifact("chunk/chunks.csv"));
    std::ofstream(ctx.artifact("chunk/chunks.csv")) << data << "\n";
  }
  auto after_drift = pipeline::verify_manifest(ctx);
  CHECK_FALSE(after_drift.clean());
  CHECK(after_drift.drifted == std::vector<std::string>{"chunk/chunks.csv"});

  fs::remove(ctx.artifact("compare/comparison.md"));
  auto after_remove = pipeline::verify_manifest(ctx);
  CHECK(after_remove.missing == std::vector<std::string>{"compare/comparison.md"});
}

TEST_CASE("two replay runs with the same manifest are byte-identical") {
  auto a = make_context("det", "", "runs-first");
  auto b = make_context("det", "", "runs-second");
  fs::remove_all(a.run_dir());
  fs::remove_all(b.run_dir());
  run_all(a);
  run_all(b);
  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a.run_dir())) {
    if (!entry.is_regular_file()) continue;
    std::string rel = fs::relative(entry.path(), a.run_dir()).string();
    if (rel == "audit.jsonl" || rel == "manifest.jsonl") continue;  // timestamps
    CHECK(hash_file(entry.path().string()) == hash_file((fs::path(b.run_dir()) / rel).string()));
    ++compared;
  }
  CHECK(compared > 10);
}

TEST_CASE("hallucinated indices abort the run with the dedicated error") {
  auto bad_dedup = make_context("bad-dedup", workspace().built.bad_dedup_replay);
  fs::remove_all(bad_dedup.run_dir());
  for (pipeline::Phase p :
       {pipeline::Phase::clean, pipeline::Phase::chunk, pipeline::Phase::code})
    pipeline::run_phase(bad_dedup, p);
  CHECK_THROWS_AS(pipeline::run_phase(bad_dedup, pipeline::Phase::reduce), HallucinationError);

  auto bad_theming = make_context("bad-theming", workspace().built.bad_theming_replay);
  fs::remove_all(bad_theming.run_dir());
  for (pipeline::Phase p : {pipeline::Phase::clean, pipeline::Phase::chunk, pipeline::Phase::code,
                            pipeline::Phase::reduce})
    pipeline::run_phase(bad_theming, p);
  CHECK_THROWS_AS(pipeline::run_phase(bad_theming, pipeline::Phase::themes), HallucinationError);
}

TEST_CASE("a stale lock blocks the run directory") {
  auto ctx = make_context("locked");
  fs::remove_all(ctx.run_dir());
  fs::create_directories(ctx.run_dir());
  std::ofstream(fs::path(ctx.run_dir()) / ".lock") << "";
  CHECK_THROWS_WITH_AS(pipeline::run_phase(ctx, pipeline::Phase::clean),
                       doctest::Contains("lock"), ValidationError);
  fs::remove(fs::path(ctx.run_dir()) / ".lock");
}

TEST_CASE("replay backend without a store path is rejected") {
  const Workspace& ws = workspace();
  std::string config = fixtures::run_config_json(ws.shape, ws.built.corpus_dir, "",
                                                 ws.built.reference_path,
                                                 (ws.root / "runs").string(), 2);
  // replay_store "" resolves to empty; the code phase needs the store
  pipeline::RunContext ctx;
  ctx.config = pipeline::config_from_json(config, ws.root.string());
  ctx.config.replay_store.clear();
  ctx.run_id = "no-store";
  fs::remove_all(ctx.run_dir());
  pipeline::run_phase(ctx, pipeline::Phase::clean);
  pipeline::run_phase(ctx, pipeline::Phase::chunk);
  CHECK_THROWS_AS(pipeline::run_phase(ctx, pipeline::Phase::code), ValidationError);
}
