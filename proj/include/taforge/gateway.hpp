#pragma once

#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "taforge/corpus.hpp"

namespace taforge::gateway {

struct ModelConfig {
  std::string model_id = "gpt-3.5-turbo";
  double temperature = 0.0;  // valid range [0, 2]
  int context_limit = 4097;
  int reserved_response_tokens = 1000;
};

enum class Purpose { initial_coding, dedup, theming, naming, probe };
const char* purpose_name(Purpose p);

struct ChatMessage {
  std::string role = "user";
  std::string content;
};

// Self-contained request: the model keeps no state between calls.
struct ChatRequest {
  std::vector<ChatMessage> messages;
  ModelConfig config;
  Purpose purpose = Purpose::probe;
};

enum class BackendKind { live, replay };

struct ChatResponse {
  std::string content;
  BackendKind backend = BackendKind::replay;
  long latency_ms = 0;
  std::string fingerprint;
};

struct BudgetReport {
  int prompt_tokens = 0;
  int headroom = 0;
  bool accept = false;
};

// Stable hash of (model_id, temperature, messages).
std::string fingerprint(const ChatRequest& req);

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string send(const ChatRequest& req, const std::string& fp) = 0;
  virtual BackendKind kind() const = 0;
};

// Append-only file of recorded exchanges, one JSON object per line:
// {"fingerprint": ..., "content": ...}. A fingerprint recorded once behaves
// as a pure lookup; recorded several times with differing contents it is
// consumed in file order (temperature-sweep recordings).
class ReplayStore {
 public:
  ReplayStore() = default;
  void load(const std::string& path);
  void append(const std::string& fp, const std::string& content);  // also persists when attached
  void attach_file(const std::string& path);  // appends go to this file
  bool contains(const std::string& fp) const;
  std::string take(const std::string& fp);  // miss -> BackendError naming the fingerprint

 private:
  struct Entry {
    std::vector<std::string> contents;
    std::size_t cursor = 0;
  };
  mutable std::mutex mutex_;
  std::map<std::string, Entry> entries_;
  std::string file_;
};

class ReplayBackend : public Backend {
 public:
  explicit ReplayBackend(std::shared_ptr<ReplayStore> store) : store_(std::move(store)) {}
  std::string send(const ChatRequest& req, const std::string& fp) override;
  BackendKind kind() const override { return BackendKind::replay; }

 private:
  std::shared_ptr<ReplayStore> store_;
};

struct LiveConfig {
  std::string base_url = "https://api.openai.com";
  std::string api_key;
  int max_retries = 3;
  int backoff_ms = 500;  // doubled per retry
  int timeout_seconds = 30;
};

// OpenAI-compatible chat-completions client. Retries transport errors,
// 429 and 5xx with exponential backoff; a finish_reason of "length" is
// surfaced as a response_truncated error.
class LiveBackend : public Backend {
 public:
  explicit LiveBackend(LiveConfig config) : config_(std::move(config)) {}
  std::string send(const ChatRequest& req, const std::string& fp) override;
  BackendKind kind() const override { return BackendKind::live; }

 private:
  LiveConfig config_;
};

// JSON-lines audit trail, one exchange per line; appends are serialized.
class AuditLog {
 public:
  explicit AuditLog(std::string path) : path_(std::move(path)) {}
  void record(const ChatRequest& req, const ChatResponse& resp);
  const std::string& path() const { return path_; }

 private:
  std::mutex mutex_;
  std::string path_;
};

struct GatewayConfig {
  corpus::TokenEstimatorConfig estimator;
  int parallelism_cap = 2;
};

// Budget preflight plus request execution. No request whose preflight
// verdict is reject ever reaches the backend.
class Gateway {
 public:
  Gateway(std::shared_ptr<Backend> backend, GatewayConfig config);

  BudgetReport preflight(const ChatRequest& req) const;
  ChatResponse complete(const ChatRequest& req);

  void set_audit_log(std::shared_ptr<AuditLog> log) { audit_ = std::move(log); }
  void set_record_store(std::shared_ptr<ReplayStore> store) { record_ = std::move(store); }
  int parallelism_cap() const { return config_.parallelism_cap; }

 private:
  std::shared_ptr<Backend> backend_;
  GatewayConfig config_;
  std::shared_ptr<AuditLog> audit_;
  std::shared_ptr<ReplayStore> record_;

  // counting semaphore over the configured cap
  std::mutex slots_mutex_;
  std::condition_variable_any slots_cv_;
  int slots_in_use_ = 0;
};

}  // namespace taforge::gateway
