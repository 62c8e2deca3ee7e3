#include "doctest.h"
#include "taforge/csv.hpp"
#include "taforge/errors.hpp"
#include "taforge/hash.hpp"

using namespace taforge;

TEST_CASE("csv round-trip with quoting") {
  csv::Table table;
  table.header = {"FileName", "Interview_chunk", "Tokens"};
  table.rows = {{"part_0_Play_1.txt", "plain text", "2479"},
                {"part_1_Play_1.txt", "commas, \"quotes\" and\nnewlines", "2513"}};
  std::string data = csv::serialize(table);
  csv::Table back = csv::parse(data);
  CHECK(back.header == table.header);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows == table.rows);
  // serialization is stable
  CHECK(csv::serialize(back) == data);
}

TEST_CASE("csv parse rejects malformed rows") {
  CHECK_THROWS_AS(csv::parse("a,b\n1,2,3\n"), ValidationError);
  CHECK_THROWS_AS(csv::parse("a,b\n\"unbalanced,2\n"), ValidationError);
}

TEST_CASE("fnv1a64 hash is stable") {
  CHECK(hash_hex("") == to_hex(0xcbf29ce484222325ull));
  CHECK(hash_hex("a") != hash_hex("b"));
  CHECK(hash_hex("abc") == hash_hex("abc"));
}
