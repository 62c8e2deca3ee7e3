#include "taforge/gateway.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "taforge/errors.hpp"
#include "taforge/hash.hpp"

// keep the heavy httplib include out of the public headers
#include "httplib.h"

using nlohmann::json;

namespace taforge::gateway {

const char* purpose_name(Purpose p) {
  switch (p) {
    case Purpose::initial_coding: return "initial_coding";
    case Purpose::dedup: return "dedup";
    case Purpose::theming: return "theming";
    case Purpose::naming: return "naming";
    case Purpose::probe: return "probe";
  }
  return "unknown";
}

std::string format_temperature(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", t);
  return buf;
}

std::string fingerprint(const ChatRequest& req) {
  std::string canon = req.config.model_id;
  canon.push_back('\x1f');
  canon += format_temperature(req.config.temperature);
  for (const auto& m : req.messages) {
    canon.push_back('\x1e');
    canon += m.role;
    canon.push_back('\x1f');
    canon += m.content;
  }
  return hash_hex(canon);
}

void ReplayStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read replay store: " + path);
  std::lock_guard lock(mutex_);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("fingerprint") || !j.contains("content"))
      throw ValidationError("replay store " + path + ": malformed line " +
                            std::to_string(line_no));
    entries_[j["fingerprint"].get<std::string>()].contents.push_back(
        j["content"].get<std::string>());
  }
}

void ReplayStore::attach_file(const std::string& path) {
  std::lock_guard lock(mutex_);
  file_ = path;
}

void ReplayStore::append(const std::string& fp, const std::string& content) {
  std::lock_guard lock(mutex_);
  entries_[fp].contents.push_back(content);
  if (!file_.empty()) {
    std::ofstream out(file_, std::ios::app);
    if (!out) throw ValidationError("cannot append to replay store: " + file_);
    out << json{{"fingerprint", fp}, {"content", content}}.dump() << "\n";
  }
}

bool ReplayStore::contains(const std::string& fp) const {
  std::lock_guard lock(mutex_);
  return entries_.count(fp) > 0;
}

std::string ReplayStore::take(const std::string& fp) {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(fp);
  if (it == entries_.end())
    throw BackendError("replay miss: no recording for fingerprint " + fp);
  Entry& e = it->second;
  // A single distinct content behaves as a pure lookup regardless of how
  // often it is requested; differing contents are consumed in record order.
  bool uniform = true;
  for (const auto& c : e.contents)
    if (c != e.contents.front()) { uniform = false; break; }
  if (uniform) return e.contents.front();
  if (e.cursor >= e.contents.size())
    throw BackendError("replay exhausted: fingerprint " + fp + " recorded " +
                       std::to_string(e.contents.size()) + " times");
  return e.contents[e.cursor++];
}

std::string ReplayBackend::send(const ChatRequest&, const std::string& fp) {
  return store_->take(fp);
}

std::string LiveBackend::send(const ChatRequest& req, const std::string&) {
  json body;
  body["model"] = req.config.model_id;
  body["messages"] = json::array();
  for (const auto& m : req.messages)
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  body["temperature"] = req.config.temperature;
  const std::string payload = body.dump();

  std::string last_error;
  int backoff = config_.backoff_ms;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
    httplib::Client client(config_.base_url);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty())
      headers.emplace("Authorization", "Bearer " + config_.api_key);
    auto res = client.Post("/v1/chat/completions", headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "http status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw BackendError("chat completion failed: http status " + std::to_string(res->status) +
                         ": " + res->body);
    json resp = json::parse(res->body, nullptr, false);
    if (resp.is_discarded() || !resp.contains("choices") || resp["choices"].empty())
      throw BackendError("chat completion: malformed response body");
    const json& choice = resp["choices"][0];
    if (choice.value("finish_reason", "") == "length")
      throw BackendError("response_truncated");
    return choice.at("message").at("content").get<std::string>();
  }
  throw BackendError("chat completion failed after " + std::to_string(config_.max_retries + 1) +
                     " attempts; last error: " + last_error);
}

void AuditLog::record(const ChatRequest& req, const ChatResponse& resp) {
  std::lock_guard lock(mutex_);
  json messages = json::array();
  for (const auto& m : req.messages)
    messages.push_back({{"role", m.role}, {"content", m.content}});
  json entry{{"timestamp", std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::system_clock::now().time_since_epoch())
                               .count()},
             {"purpose", purpose_name(req.purpose)},
             {"model", req.config.model_id},
             {"temperature", req.config.temperature},
             {"fingerprint", resp.fingerprint},
             {"backend", resp.backend == BackendKind::live ? "live" : "replay"},
             {"latency_ms", resp.latency_ms},
             {"messages", messages},
             {"response", resp.content}};
  std::ofstream out(path_, std::ios::app);
  if (!out) throw ValidationError("cannot append to audit log: " + path_);
  out << entry.dump() << "\n";
}

Gateway::Gateway(std::shared_ptr<Backend> backend, GatewayConfig config)
    : backend_(std::move(backend)), config_(std::move(config)) {
  if (config_.parallelism_cap < 1) config_.parallelism_cap = 1;
}

BudgetReport Gateway::preflight(const ChatRequest& req) const {
  BudgetReport report;
  for (const auto& m : req.messages)
    report.prompt_tokens += corpus::estimate_tokens(m.content, config_.estimator);
  report.headroom =
      req.config.context_limit - report.prompt_tokens - req.config.reserved_response_tokens;
  report.accept = report.prompt_tokens > 0 && report.headroom >= 0;
  return report;
}

ChatResponse Gateway::complete(const ChatRequest& req) {
  if (req.messages.empty()) throw ValidationError("chat request has no messages");
  if (req.config.temperature < 0 || req.config.temperature > 2)
    throw ValidationError("temperature must be in [0, 2]");
  BudgetReport budget = preflight(req);
  if (!budget.accept)
    throw ValidationError("budget preflight rejected request: " +
                          std::to_string(budget.prompt_tokens) + " prompt tokens + " +
                          std::to_string(req.config.reserved_response_tokens) +
                          " reserved > limit " + std::to_string(req.config.context_limit));

  {
    std::unique_lock lock(slots_mutex_);
    slots_cv_.wait(lock, [&] { return slots_in_use_ < config_.parallelism_cap; });
    ++slots_in_use_;
  }
  ChatResponse resp;
  try {
    resp.fingerprint = fingerprint(req);
    auto start = std::chrono::steady_clock::now();
    resp.content = backend_->send(req, resp.fingerprint);
    resp.latency_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                            std::chrono::steady_clock::now() - start)
                                            .count());
    resp.backend = backend_->kind();
  } catch (...) {
    std::lock_guard lock(slots_mutex_);
    --slots_in_use_;
    slots_cv_.notify_one();
    throw;
  }
  {
    std::lock_guard lock(slots_mutex_);
    --slots_in_use_;
    slots_cv_.notify_one();
  }
  if (record_ && backend_->kind() == BackendKind::live)
    record_->append(resp.fingerprint, resp.content);
  if (audit_) audit_->record(req, resp);
  return resp;
}

}  // namespace taforge::gateway
