#include <array>
#include <initializer_list>
#include <memory>

#include "doctest.h"
#include "json.hpp"
#include "taforge/codegen.hpp"
#include "taforge/errors.hpp"
#include "taforge/fixtures.hpp"
#include "taforge/prompts.hpp"

using namespace taforge;
using nlohmann::json;

namespace {

corpus::Chunk make_chunk(std::string file_name, std::string text) {
  corpus::Chunk c;
  c.file_name = std::move(file_name);
  c.text = std::move(text);
  c.doc_id = "doc";
  return c;
}

std::string themes_json(std::initializer_list<std::array<const char*, 3>> entries) {
  json arr = json::array();
  for (const auto& e : entries)
    arr.push_back({{"name", e[0]}, {"description", e[1]}, {"quote", e[2]}});
  return json{{"Themes", arr}}.dump();
}

struct Rig {
  std::shared_ptr<fixtures::ScriptedBackend> backend =
      std::make_shared<fixtures::ScriptedBackend>();
  gateway::Gateway gw{backend, {}};
  gateway::ModelConfig model;
  prompts::TemplateSet templates = prompts::TemplateSet::builtin();
  codegen::CodegenConfig config;
};

}  // namespace

TEST_CASE("extract_json_object recovers a prose-wrapped object") {
  CHECK(codegen::extract_json_object("{\"a\":1}") == "{\"a\":1}");
  CHECK(codegen::extract_json_object("Sure! Here you go: {\"a\": 1} hope that helps") ==
        "{\"a\": 1}");
  CHECK_THROWS_WITH_AS(codegen::extract_json_object("no json at all"),
                       doctest::Contains("malformed_response"), ValidationError);
  CHECK_THROWS_AS(codegen::extract_json_object("{broken"), ValidationError);
}

TEST_CASE("code_chunk parses themes and verifies the published-style quote") {
  Rig rig;
  auto chunk = make_chunk(
      "part_0_teaching_00.txt",
      "Well, to start: I consider it one of the most important classes I teach, and the "
      "students generally agree once the semester ends.");
  rig.backend->add(gateway::Purpose::initial_coding, "most important classes",
                   themes_json({{{"Importance of Data Analysis", "The respondent values the class",
                                  "I consider it one of the most important classes I teach"}}}));
  auto result = codegen::code_chunk(chunk, rig.gw, rig.model, rig.templates.initial_coding,
                                    rig.config);
  REQUIRE(result.codes.size() == 1);
  CHECK(result.codes[0].name == "Importance of Data Analysis");
  CHECK(result.codes[0].source_chunk == "part_0_teaching_00.txt");
  CHECK(codegen::verify_quote(result.codes[0].quotes.front(), chunk, 0.8) ==
        codegen::Verification::verified);
  // the 4-word name is linted, not rejected
  REQUIRE(result.lints.size() == 1);
  CHECK(result.lints[0].find("over 3 words") != std::string::npos);
}

TEST_CASE("code_chunk accepts an empty Themes array") {
  Rig rig;
  rig.backend->add(gateway::Purpose::initial_coding, "", "{\"Themes\": []}");
  auto result = codegen::code_chunk(make_chunk("c.txt", "some text"), rig.gw, rig.model,
                                    rig.templates.initial_coding, rig.config);
  CHECK(result.codes.empty());
}

TEST_CASE("code_chunk rejects an overfull response") {
  Rig rig;
  rig.backend->add(gateway::Purpose::initial_coding, "",
                   themes_json({{{"a", "d", "q"}}, {{"b", "d", "q"}}, {{"c", "d", "q"}},
                                {{"d", "d", "q"}}}));
  CHECK_THROWS_WITH_AS(codegen::code_chunk(make_chunk("c.txt", "some text"), rig.gw, rig.model,
                                           rig.templates.initial_coding, rig.config),
                       doctest::Contains("overfull_response"), ValidationError);
}

TEST_CASE("verify_quote classification") {
  auto chunk = make_chunk("c.txt",
                          "alpha beta gamma delta epsilon zeta eta theta iota kappa "
                          "lambda mu nu xi omicron pi rho sigma tau upsilon");
  // verbatim after whitespace normalization
  CHECK(codegen::verify_quote("gamma   delta\nepsilon", chunk, 0.8) ==
        codegen::Verification::verified);
  // one word paraphrased out of ten -> ratio 0.9
  CHECK(codegen::verify_quote("alpha beta gamma delta epsilon zeta eta theta iota OTHER", chunk,
                              0.8) == codegen::Verification::fuzzy);
  // fabricated from elsewhere
  CHECK(codegen::verify_quote("totally unrelated material from another interview", chunk, 0.8) ==
        codegen::Verification::unverified);
}

TEST_CASE("code_corpus assembles in chunk order under parallelism") {
  std::vector<corpus::Chunk> chunks;
  for (int i = 0; i < 10; ++i)
    chunks.push_back(make_chunk("part_" + std::to_string(i) + "_d.txt",
                                "chunkmark" + std::to_string(i) + " body text"));
  auto run_once = [&chunks] {
    Rig rig;
    for (int i = 0; i < 10; ++i) {
      std::string name = "Code " + std::to_string(i);
      rig.backend->add(
          gateway::Purpose::initial_coding, "chunkmark" + std::to_string(i) + " ",
          themes_json({{{name.c_str(), "desc", "body text"}}}));
    }
    gateway::GatewayConfig gcfg;
    gcfg.parallelism_cap = 4;
    gateway::Gateway gw(rig.backend, gcfg);
    return codegen::code_corpus(chunks, gw, rig.model, rig.templates.initial_coding, rig.config,
                                "run-x");
  };
  auto first = run_once();
  auto second = run_once();
  REQUIRE(first.codebook.codes.size() == 10);
  CHECK(first.failures.empty());
  for (int i = 0; i < 10; ++i) {
    CHECK(first.codebook.codes[static_cast<std::size_t>(i)].index == i);
    CHECK(first.codebook.codes[static_cast<std::size_t>(i)].name ==
          "Code " + std::to_string(i));
  }
  CHECK(codegen::codebook_to_csv(first.codebook) == codegen::codebook_to_csv(second.codebook));
}

TEST_CASE("code_corpus tolerates failures under the cap and fails above it") {
  std::vector<corpus::Chunk> chunks;
  for (int i = 0; i < 20; ++i)
    chunks.push_back(make_chunk("part_" + std::to_string(i) + "_d.txt",
                                "chunkmark" + std::to_string(i) + " body"));
  Rig rig;
  for (int i = 0; i < 20; ++i) {
    // chunk 7 gets garbage: one failure out of 20 stays under the 10% cap
    std::string reply = i == 7 ? "not json" : themes_json({{{"n", "d", "body"}}});
    rig.backend->add(gateway::Purpose::initial_coding, "chunkmark" + std::to_string(i) + " ",
                     reply);
  }
  auto result = codegen::code_corpus(chunks, rig.gw, rig.model, rig.templates.initial_coding,
                                     rig.config, "run");
  CHECK(result.codebook.codes.size() == 19);
  REQUIRE(result.failures.size() == 1);
  CHECK(result.failures[0].find("part_7_d.txt") != std::string::npos);

  Rig strict;
  for (int i = 0; i < 20; ++i) {
    std::string reply = (i % 4 == 0) ? "not json" : themes_json({{{"n", "d", "body"}}});
    strict.backend->add(gateway::Purpose::initial_coding, "chunkmark" + std::to_string(i) + " ",
                        reply);
  }
  CHECK_THROWS_AS(codegen::code_corpus(chunks, strict.gw, strict.model,
                                       strict.templates.initial_coding, strict.config, "run"),
                  ValidationError);
}

TEST_CASE("code_corpus with no chunks returns an empty codebook and a lint") {
  Rig rig;
  auto result = codegen::code_corpus({}, rig.gw, rig.model, rig.templates.initial_coding,
                                     rig.config, "run");
  CHECK(result.codebook.codes.empty());
  CHECK(result.lints.size() == 1);
}

TEST_CASE("codebook csv round-trip at both stages") {
  codegen::Codebook book;
  book.provenance = "run-1";
  book.stage = codegen::Stage::raw;
  codegen::Code a;
  a.index = 0;
  a.name = "Violence in Games";
  a.description = "desc, with commas";
  a.quotes = {"a quote\nwith newline"};
  a.source_chunk = "part_0_d.txt";
  a.quote_verified = codegen::Verification::verified;
  book.codes.push_back(a);

  std::string raw_csv = codegen::codebook_to_csv(book);
  CHECK(raw_csv.rfind("Index,Codes,Description,Quote,SourceChunk,QuoteVerified,Stage,Provenance",
                      0) == 0);
  auto back = codegen::codebook_from_csv(raw_csv);
  REQUIRE(back.codes.size() == 1);
  CHECK(back.codes[0].name == a.name);
  CHECK(back.codes[0].quotes == a.quotes);
  CHECK(back.stage == codegen::Stage::raw);
  CHECK(back.provenance == "run-1");
  CHECK(codegen::codebook_to_csv(back) == raw_csv);

  book.stage = codegen::Stage::reduced;
  book.codes[0].merged_from = {0, 3};
  book.codes[0].quotes = {"q0", "q3"};
  std::string reduced_csv = codegen::codebook_to_csv(book);
  CHECK(reduced_csv.find("MergedFrom") != std::string::npos);
  auto reduced = codegen::codebook_from_csv(reduced_csv);
  REQUIRE(reduced.codes.size() == 1);
  CHECK(reduced.codes[0].merged_from == std::vector<int>{0, 3});
  REQUIRE(reduced.codes[0].quotes.size() == 2);
  CHECK(reduced.codes[0].quotes[1] == "q3");
}
