#include "doctest.h"
#include "taforge/errors.hpp"
#include "taforge/evaluator.hpp"

using namespace taforge;

namespace {

codegen::Codebook keyword_book() {
  codegen::Codebook book;
  book.stage = codegen::Stage::reduced;
  auto add = [&](int idx, std::string name, std::string description) {
    codegen::Code c;
    c.index = idx;
    c.name = std::move(name);
    c.description = std::move(description);
    c.quotes = {"q"};
    book.codes.push_back(std::move(c));
  };
  add(0, "Topic A", "Respondents discuss subject zero.");
  add(1, "Violence in Games", "Concerns about aggressive content.");
  add(2, "Topic B", "Notes on marketing practices and reach.");
  add(3, "Marketing of Videogames", "Marketing budgets and campaigns.");
  add(4, "Violent Overtones", "Not a whole-word match for the keyword.");
  return book;
}

themer::Theme make_theme(int id, std::string name, std::string description) {
  themer::Theme t;
  t.theme_id = id;
  t.name = std::move(name);
  t.description = std::move(description);
  t.member_indices = {0};
  return t;
}

themer::ThemeSet make_set(std::vector<themer::Theme> themes, int run, double temperature) {
  themer::ThemeSet set;
  set.themes = std::move(themes);
  set.run_ordinal = run;
  set.temperature = temperature;
  set.codebook_stage = "reduced";
  set.n_requested = static_cast<int>(set.themes.size());
  return set;
}

struct Scenario {
  themer::ThemeSet phase3 = make_set(
      {make_theme(0, "Gaming and Education", "use of video games for education and learning"),
       make_theme(1, "Mobile Gaming", "accessibility of mobile platforms in the market")},
      0, 0.0);
  reviewer::StabilityReport phase4;
  std::vector<evaluator::ReferenceTheme> reference;

  Scenario() {
    auto sweep = make_set(
        {make_theme(0, "Age Restrictions", "age restrictions and rating systems for games")},
        0, 1.0);
    phase4 = reviewer::cluster_and_score({sweep}, phase3, 0.35);
    reference = {
        {"1", "Educational perspective", "use of video games for education and learning", {}},
        {"2", "Regulations", "age restrictions and rating systems for games", {}},
        {"3", "Violence", "", {"violence"}},
        {"4", "Psychology", "", {"psychology"}},
        {"5", "Half Match", "mobile platforms market accessibility plus unrelated padding "
                            "words diluting overlap significantly", {}},
    };
  }
};

}  // namespace

TEST_CASE("search_codes: whole-word case-insensitive, one hit per code, sorted") {
  auto book = keyword_book();
  auto violence = evaluator::search_codes(book, {"violence"});
  REQUIRE(violence.size() == 1);
  CHECK(violence[0].index == 1);
  CHECK(violence[0].field == "name");

  auto marketing = evaluator::search_codes(book, {"marketing"});
  REQUIRE(marketing.size() == 2);
  CHECK(marketing[0].index == 2);
  CHECK(marketing[0].field == "description");
  CHECK(marketing[1].index == 3);
  CHECK(marketing[1].field == "name");  // name hit reported even though both fields match

  CHECK(evaluator::search_codes(book, {"psychology"}).empty());
  CHECK(evaluator::search_codes({}, {"violence"}).empty());

  auto upper = evaluator::search_codes(book, {"VIOLENCE"});
  REQUIRE(upper.size() == 1);
  CHECK(upper[0].index == 1);
}

TEST_CASE("match_themes walks the verdict ladder") {
  Scenario s;
  auto records = evaluator::match_themes(s.phase3, s.phase4, s.reference, keyword_book(), 0.35);
  REQUIRE(records.size() == 5);

  CHECK(records[0].verdict == evaluator::Verdict::phase3);
  CHECK(records[0].best_phase3_theme == 0);
  CHECK(records[0].best_phase3_score > 0.35);

  CHECK(records[1].verdict == evaluator::Verdict::phase4);
  CHECK(records[1].best_phase4_run == 0);

  CHECK(records[2].verdict == evaluator::Verdict::as_code);
  REQUIRE(records[2].code_hits.size() == 1);
  CHECK(records[2].code_hits[0].index == 1);

  CHECK(records[3].verdict == evaluator::Verdict::missed);
  CHECK(records[3].code_hits.empty());

  CHECK(records[4].verdict == evaluator::Verdict::unclear);
  CHECK(records[4].best_phase3_score >= 0.175);
  CHECK(records[4].best_phase3_score < 0.35);
}

TEST_CASE("raising tau never upgrades a missed verdict") {
  Scenario s;
  auto loose = evaluator::match_themes(s.phase3, s.phase4, s.reference, keyword_book(), 0.35);
  auto strict = evaluator::match_themes(s.phase3, s.phase4, s.reference, keyword_book(), 0.6);
  for (std::size_t i = 0; i < loose.size(); ++i) {
    if (loose[i].verdict == evaluator::Verdict::missed)
      CHECK((strict[i].verdict == evaluator::Verdict::missed ||
             strict[i].verdict == evaluator::Verdict::as_code));
    if (strict[i].verdict == evaluator::Verdict::phase3)
      CHECK(loose[i].verdict == evaluator::Verdict::phase3);
  }
}

TEST_CASE("apply_overrides records the human verdict without erasing the automatic one") {
  Scenario s;
  auto records = evaluator::match_themes(s.phase3, s.phase4, s.reference, keyword_book(), 0.35);
  evaluator::apply_overrides(records, {{"4", "phase3"}});
  REQUIRE(records[3].human_verdict.has_value());
  CHECK(*records[3].human_verdict == "phase3");
  CHECK(records[3].verdict == evaluator::Verdict::missed);
  CHECK_FALSE(records[0].human_verdict.has_value());
}

TEST_CASE("build_report renders deterministically and lists unmatched themes") {
  Scenario s;
  auto records = evaluator::match_themes(s.phase3, s.phase4, s.reference, keyword_book(), 0.35);
  auto report = evaluator::build_report(records, s.reference, s.phase3, 0.35);
  auto again = evaluator::build_report(records, s.reference, s.phase3, 0.35);
  CHECK(report.markdown == again.markdown);
  CHECK(report.csv == again.csv);
  CHECK(report.markdown.find("Educational perspective") != std::string::npos);
  CHECK(report.markdown.find("phase3") != std::string::npos);
  // "Mobile Gaming" clears tau with no reference row -> listed as unmatched
  CHECK(report.markdown.find("matching no reference theme") != std::string::npos);
  CHECK(report.csv.find("Regulations") != std::string::npos);
}

TEST_CASE("build_report refuses an empty reference list") {
  Scenario s;
  CHECK_THROWS_AS(evaluator::build_report({}, {}, s.phase3, 0.35), ValidationError);
}

TEST_CASE("reference json round-trip") {
  std::vector<evaluator::ReferenceTheme> refs = {
      {"3a", "Violence and Aggression", "impact on players", {"violence"}},
      {"8", "Game Marketing", "", {"marketing", "advertising"}}};
  std::string data = evaluator::reference_to_json(refs);
  auto back = evaluator::reference_from_json(data);
  REQUIRE(back.size() == 2);
  CHECK(back[0].ref_id == "3a");
  CHECK(back[0].keywords == std::vector<std::string>{"violence"});
  CHECK(back[1].description.empty());
  CHECK(evaluator::reference_to_json(back) == data);
}
