#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "taforge/errors.hpp"
#include "taforge/fixtures.hpp"
#include "taforge/gateway.hpp"

using namespace taforge;
namespace fs = std::filesystem;

namespace {

gateway::ChatRequest make_request(std::string content, double temperature = 0.0) {
  gateway::ChatRequest req;
  req.messages.push_back({"user", std::move(content)});
  req.config.temperature = temperature;
  return req;
}

std::string n_words(int n) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += 'w';
  }
  return out;
}

// Backend that records every request it is handed and checks the budget
// invariant: no transmitted request may exceed the context limit.
class AssertingBackend : public gateway::Backend {
 public:
  std::string send(const gateway::ChatRequest& req, const std::string&) override {
    ++calls;
    int prompt_tokens = 0;
    for (const auto& m : req.messages)
      prompt_tokens += static_cast<int>(taforge::corpus::estimate_tokens(m.content, {}));
    if (prompt_tokens + req.config.reserved_response_tokens > req.config.context_limit)
      ++violations;
    return "ok";
  }
  gateway::BackendKind kind() const override { return gateway::BackendKind::live; }
  int calls = 0;
  int violations = 0;
};

}  // namespace

TEST_CASE("fingerprint is stable and sensitive to every input") {
  auto req = make_request("hello");
  CHECK(gateway::fingerprint(req) == gateway::fingerprint(req));
  auto other = make_request("hello!");
  CHECK(gateway::fingerprint(req) != gateway::fingerprint(other));
  auto warm = make_request("hello", 1.0);
  CHECK(gateway::fingerprint(req) != gateway::fingerprint(warm));
  auto model = make_request("hello");
  model.config.model_id = "gpt-4";
  CHECK(gateway::fingerprint(req) != gateway::fingerprint(model));
  auto role = make_request("hello");
  role.messages[0].role = "system";
  CHECK(gateway::fingerprint(req) != gateway::fingerprint(role));
}

TEST_CASE("preflight budget arithmetic") {
  gateway::Gateway gw(std::make_shared<AssertingBackend>(), {});
  auto req = make_request(n_words(2500));
  auto report = gw.preflight(req);
  CHECK(report.accept);
  CHECK(report.prompt_tokens == 2500);
  CHECK(report.headroom == 597);  // 4097 - 2500 - 1000

  auto empty = make_request("");
  CHECK_FALSE(gw.preflight(empty).accept);

  auto over = make_request(n_words(3200));
  CHECK_FALSE(gw.preflight(over).accept);
}

TEST_CASE("complete never transmits a rejected request") {
  auto backend = std::make_shared<AssertingBackend>();
  gateway::Gateway gw(backend, {});
  CHECK_THROWS_AS(gw.complete(make_request(n_words(3200))), ValidationError);
  CHECK(backend->calls == 0);
  CHECK_THROWS_AS(gw.complete(make_request("ok", 2.5)), ValidationError);
  CHECK(backend->calls == 0);
  gw.complete(make_request("a short prompt"));
  CHECK(backend->calls == 1);
  CHECK(backend->violations == 0);
}

TEST_CASE("budget safety property over random prompt sizes") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> size(1, 4000);
  auto backend = std::make_shared<AssertingBackend>();
  gateway::Gateway gw(backend, {});
  int rejected = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto req = make_request(n_words(size(rng)));
    try {
      gw.complete(req);
    } catch (const ValidationError&) {
      ++rejected;
    }
  }
  CHECK(backend->violations == 0);
  CHECK(backend->calls + rejected == 300);
  CHECK(rejected > 0);
}

TEST_CASE("replay store: uniform recording is a pure lookup") {
  gateway::ReplayStore store;
  store.append("fp1", "same");
  store.append("fp1", "same");
  CHECK(store.take("fp1") == "same");
  CHECK(store.take("fp1") == "same");
  CHECK(store.take("fp1") == "same");
}

TEST_CASE("replay store: differing contents are consumed in record order") {
  gateway::ReplayStore store;
  store.append("fp", "first");
  store.append("fp", "second");
  CHECK(store.take("fp") == "first");
  CHECK(store.take("fp") == "second");
  CHECK_THROWS_AS(store.take("fp"), BackendError);
}

TEST_CASE("replay miss is a hard error naming the fingerprint") {
  gateway::ReplayStore store;
  try {
    store.take("deadbeef");
    FAIL("expected a replay miss");
  } catch (const BackendError& e) {
    CHECK(std::string(e.what()).find("deadbeef") != std::string::npos);
  }
}

TEST_CASE("replay store file round-trip") {
  fs::path path = fs::temp_directory_path() / "taforge_store_test.jsonl";
  fs::remove(path);
  {
    gateway::ReplayStore store;
    store.attach_file(path.string());
    store.append("fp-a", "alpha");
    store.append("fp-b", "beta with \"quotes\" and\nnewline");
  }
  gateway::ReplayStore loaded;
  loaded.load(path.string());
  CHECK(loaded.take("fp-a") == "alpha");
  CHECK(loaded.take("fp-b") == "beta with \"quotes\" and\nnewline");
  fs::remove(path);
}

TEST_CASE("gateway records live exchanges but not replayed ones") {
  auto record = std::make_shared<gateway::ReplayStore>();
  auto req = make_request("record me");
  {
    auto scripted = std::make_shared<fixtures::ScriptedBackend>();
    scripted->add(gateway::Purpose::probe, "", "answer");
    gateway::Gateway gw(scripted, {});
    gw.set_record_store(record);
    CHECK(gw.complete(req).content == "answer");
  }
  CHECK(record->contains(gateway::fingerprint(req)));
  {
    auto replay = std::make_shared<gateway::ReplayBackend>(record);
    gateway::Gateway gw(replay, {});
    auto other = std::make_shared<gateway::ReplayStore>();
    gw.set_record_store(other);
    CHECK(gw.complete(req).content == "answer");
    CHECK(gw.complete(req).content == "answer");  // replay determinism
    CHECK_FALSE(other->contains(gateway::fingerprint(req)));
  }
}

TEST_CASE("audit log captures one entry per exchange") {
  fs::path path = fs::temp_directory_path() / "taforge_audit_test.jsonl";
  fs::remove(path);
  auto scripted = std::make_shared<fixtures::ScriptedBackend>();
  scripted->add(gateway::Purpose::probe, "one", "1");
  scripted->add(gateway::Purpose::probe, "two", "2");
  gateway::Gateway gw(scripted, {});
  gw.set_audit_log(std::make_shared<gateway::AuditLog>(path.string()));
  gw.complete(make_request("one"));
  gw.complete(make_request("two"));
  std::ifstream in(path);
  int lines = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 2);
  fs::remove(path);
}

TEST_CASE("poets fixture replays verbatim") {
  fs::path path = fs::temp_directory_path() / "taforge_poets_test.jsonl";
  fixtures::build_poets_store(path.string());
  auto store = std::make_shared<gateway::ReplayStore>();
  store->load(path.string());
  gateway::Gateway gw(std::make_shared<gateway::ReplayBackend>(store), {});
  auto resp = gw.complete(fixtures::poets_request());
  CHECK(resp.content == fixtures::kPoetsResponse);
  CHECK(resp.content == "1. Dante Alighieri\n2. Francesco Petrarca\n3. Giovanni Boccaccio");
  fs::remove(path);
}
