#include "taforge/stub_server.hpp"

#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "taforge/errors.hpp"

using nlohmann::json;

namespace taforge::fixtures {

struct StubServer::Impl {
  httplib::Server server;
  mutable std::mutex mutex;
  std::vector<StubExchange> exchanges;
  std::vector<int> remaining_failures;
  std::vector<bool> used;
  std::vector<std::string> bodies;
  int unmatched = 0;
};

namespace {

std::string last_message_content(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.contains("messages") || !j["messages"].is_array() ||
      j["messages"].empty())
    return {};
  const json& last = j["messages"].back();
  return last.value("content", std::string{});
}

std::string envelope(const std::string& content, bool truncate) {
  return json{{"choices",
               json::array({json{{"message", json{{"role", "assistant"}, {"content", content}}},
                                 {"finish_reason", truncate ? "length" : "stop"}}})}}
      .dump();
}

}  // namespace

StubServer::StubServer() : impl_(std::make_unique<Impl>()) {
  impl_->server.Post("/v1/chat/completions",
                     [this](const httplib::Request& req, httplib::Response& res) {
                       Impl& st = *impl_;
                       std::lock_guard lock(st.mutex);
                       st.bodies.push_back(req.body);
                       const std::string content = last_message_content(req.body);
                       for (std::size_t i = 0; i < st.exchanges.size(); ++i) {
                         const StubExchange& ex = st.exchanges[i];
                         if (st.used[i] && !ex.repeatable) continue;
                         if (!ex.prompt_substring.empty() &&
                             content.find(ex.prompt_substring) == std::string::npos)
                           continue;
                         if (st.remaining_failures[i] > 0) {
                           --st.remaining_failures[i];
                           res.status = ex.fail_status;
                           res.set_content(json{{"error", "injected failure"}}.dump(),
                                           "application/json");
                           return;
                         }
                         st.used[i] = true;
                         res.status = 200;
                         res.set_content(envelope(ex.content, ex.truncate), "application/json");
                         return;
                       }
                       ++st.unmatched;
                       res.status = 500;
                       res.set_content(
                           json{{"error", "no scripted exchange matches request"},
                                {"prompt", content.substr(0, 200)}}
                               .dump(),
                           "application/json");
                     });
}

StubServer::~StubServer() { stop(); }

void StubServer::add(StubExchange exchange) {
  std::lock_guard lock(impl_->mutex);
  impl_->remaining_failures.push_back(exchange.fail_status > 0 ? exchange.fail_times : 0);
  impl_->used.push_back(false);
  impl_->exchanges.push_back(std::move(exchange));
}

int StubServer::start() {
  port_ = impl_->server.bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw BackendError("stub server: cannot bind a local port");
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void StubServer::stop() {
  if (thread_.joinable()) {
    impl_->server.stop();
    thread_.join();
  }
}

std::vector<std::string> StubServer::received_bodies() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->bodies;
}

int StubServer::unmatched_count() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->unmatched;
}

std::vector<StubExchange> load_stub_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("stub script: cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json j = json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_array())
    throw ValidationError("stub script: expected a JSON array: " + path);
  std::vector<StubExchange> out;
  for (const json& e : j) {
    StubExchange ex;
    ex.prompt_substring = e.value("prompt_substring", std::string{});
    if (!e.contains("content"))
      throw ValidationError("stub script: exchange missing \"content\": " + path);
    ex.content = e["content"].get<std::string>();
    ex.fail_status = e.value("fail_status", 0);
    ex.fail_times = e.value("fail_times", 0);
    ex.truncate = e.value("truncate", false);
    ex.repeatable = e.value("repeatable", false);
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace taforge::fixtures
