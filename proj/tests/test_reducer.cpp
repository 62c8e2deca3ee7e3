#include <memory>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "taforge/errors.hpp"
#include "taforge/fixtures.hpp"
#include "taforge/prompts.hpp"
#include "taforge/reducer.hpp"

using namespace taforge;
using nlohmann::json;

namespace {

codegen::Codebook make_book(int n) {
  codegen::Codebook book;
  book.provenance = "run";
  book.stage = codegen::Stage::raw;
  for (int i = 0; i < n; ++i) {
    codegen::Code c;
    c.index = i;
    c.name = "Code " + std::to_string(i);
    c.description = "Description " + std::to_string(i);
    c.quotes = {"quote " + std::to_string(i)};
    c.source_chunk = "part_" + std::to_string(i) + "_d.txt";
    c.quote_verified = codegen::Verification::verified;
    book.codes.push_back(std::move(c));
  }
  return book;
}

std::string items_json(const std::vector<std::vector<int>>& groups) {
  json items = json::array();
  for (std::size_t g = 0; g < groups.size(); ++g)
    items.push_back({{"topic", "group " + std::to_string(g)}, {"indices", groups[g]}});
  return json{{"items", items}}.dump();
}

reducer::ReduceResult run_reduce(const codegen::Codebook& book, const std::string& response) {
  auto backend = std::make_shared<fixtures::ScriptedBackend>();
  backend->add(gateway::Purpose::dedup, "", response);
  gateway::Gateway gw(backend, {});
  return reducer::reduce(book, gw, {}, prompts::TemplateSet::builtin().dedup);
}

}  // namespace

TEST_CASE("reduce: scripted pairing with singleton backfill") {
  auto result = run_reduce(make_book(5), items_json({{0, 3}, {1, 4}}));
  REQUIRE(result.groups.size() == 3);
  CHECK(result.groups[0].indices == std::vector<int>{0, 3});
  CHECK(result.groups[1].indices == std::vector<int>{1, 4});
  CHECK(result.groups[2].indices == std::vector<int>{2});  // backfilled
  CHECK_FALSE(result.warnings.empty());
}

TEST_CASE("reduce: full coverage produces no warnings") {
  auto result = run_reduce(make_book(4), items_json({{0, 2}, {1}, {3}}));
  CHECK(result.groups.size() == 3);
  CHECK(result.warnings.empty());
}

TEST_CASE("reduce: overlapping groups keep each index in its first group") {
  auto result = run_reduce(make_book(3), items_json({{0, 1}, {1, 2}}));
  REQUIRE(result.groups.size() == 2);
  CHECK(result.groups[0].indices == std::vector<int>{0, 1});
  CHECK(result.groups[1].indices == std::vector<int>{2});
  CHECK_FALSE(result.warnings.empty());
}

TEST_CASE("reduce: out-of-range index aborts with the hallucination error") {
  CHECK_THROWS_AS(run_reduce(make_book(5), items_json({{0, 7}})), HallucinationError);
  CHECK_THROWS_AS(run_reduce(make_book(5), items_json({{-1}})), HallucinationError);
}

TEST_CASE("reduce: hallucination guard over randomized injections") {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> size(2, 30);
  for (int trial = 0; trial < 100; ++trial) {
    int n = size(rng);
    std::uniform_int_distribution<int> bogus(n, n + 1000);
    std::vector<std::vector<int>> groups;
    std::vector<int> with_bogus;
    for (int i = 0; i < n; ++i) with_bogus.push_back(i);
    with_bogus.push_back(bogus(rng));
    groups.push_back(with_bogus);
    CHECK_THROWS_AS(run_reduce(make_book(n), items_json(groups)), HallucinationError);
  }
}

TEST_CASE("merge: representative, description and quote policy") {
  auto book = make_book(5);
  std::vector<reducer::UniqueGroup> groups = {{"g0", {0, 3}}, {"g1", {1, 4}}, {"g2", {2}}};
  auto merged = reducer::merge(book, groups, {});
  REQUIRE(merged.codebook.codes.size() == 3);
  CHECK(merged.codebook.stage == codegen::Stage::reduced);
  const auto& first = merged.codebook.codes[0];
  CHECK(first.index == 0);
  CHECK(first.name == "Code 0");
  CHECK(first.description == "Description 0");
  CHECK(first.quotes == std::vector<std::string>{"quote 0", "quote 3"});
  CHECK(first.merged_from == std::vector<int>{0, 3});

  // mapping is total over the input and surjective onto the output
  REQUIRE(merged.index_mapping.size() == 5);
  std::vector<bool> hit(3, false);
  for (auto [old_idx, new_idx] : merged.index_mapping) {
    CHECK(old_idx >= 0);
    CHECK(old_idx < 5);
    REQUIRE(new_idx >= 0);
    REQUIRE(new_idx < 3);
    hit[static_cast<std::size_t>(new_idx)] = true;
  }
  CHECK(hit == std::vector<bool>{true, true, true});

  // no quote is invented
  for (const auto& code : merged.codebook.codes)
    for (const auto& q : code.quotes) {
      bool found = false;
      for (const auto& in : book.codes)
        if (in.quotes.front() == q) found = true;
      CHECK(found);
    }
}

TEST_CASE("merge: quote cap honoured") {
  auto book = make_book(6);
  reducer::MergePolicy policy;
  policy.max_quotes_per_code = 2;
  auto merged = reducer::merge(book, {{"all", {0, 1, 2, 3, 4, 5}}}, policy);
  REQUIRE(merged.codebook.codes.size() == 1);
  CHECK(merged.codebook.codes[0].quotes == std::vector<std::string>{"quote 0", "quote 1"});
}

TEST_CASE("merge: all-singleton groups is identity modulo reindexing") {
  auto book = make_book(4);
  std::vector<reducer::UniqueGroup> groups;
  for (int i : {2, 0, 3, 1}) groups.push_back({"g", {i}});
  auto merged = reducer::merge(book, groups, {});
  REQUIRE(merged.codebook.codes.size() == 4);
  CHECK(merged.codebook.codes[0].name == "Code 2");
  CHECK(merged.codebook.codes[0].index == 0);
  CHECK(merged.codebook.codes[1].name == "Code 0");
}

TEST_CASE("merge: empty group rejected") {
  CHECK_THROWS_AS(reducer::merge(make_book(2), {{"bad", {}}}, {}), ValidationError);
}

TEST_CASE("shorten_descriptions truncates at a word boundary with a marker") {
  auto book = make_book(1);
  std::string longdesc;
  for (int i = 0; i < 100; ++i) longdesc += "word" + std::to_string(i) + " ";
  book.codes[0].description = longdesc;
  auto shortened = reducer::shorten_descriptions(book, 280);
  CHECK(shortened.stage == codegen::Stage::shortened);
  const std::string& d = shortened.codes[0].description;
  CHECK(d.size() <= 280);
  CHECK(d.substr(d.size() - 3) == "...");

  auto untouched = reducer::shorten_descriptions(make_book(1), 280);
  CHECK(untouched.codes[0].description == "Description 0");

  CHECK_THROWS_AS(reducer::shorten_descriptions(make_book(1), 20), ValidationError);
}

TEST_CASE("groups json round-trip preserves the raw response") {
  auto result = run_reduce(make_book(3), items_json({{0, 2}, {1}}));
  std::string data = reducer::groups_to_json(result);
  CHECK(data.find("\"raw_response\"") != std::string::npos);
  auto back = reducer::groups_from_json(data);
  REQUIRE(back.size() == 2);
  CHECK(back[0].indices == std::vector<int>{0, 2});
  CHECK(back[1].indices == std::vector<int>{1});
}
