#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace taforge::fixtures {

// One scripted reply of the stand-in chat-completions endpoint, with
// optional failure injection ahead of the successful response.
struct StubExchange {
  std::string prompt_substring;  // matched against the last message; empty matches anything
  std::string content;           // assistant reply content
  int fail_status = 0;           // e.g. 429 or 503; served fail_times before the real reply
  int fail_times = 0;
  bool truncate = false;  // reply carries finish_reason "length"
  bool repeatable = false;  // never consumed; matches any number of requests
};

// Minimal HTTP server answering POST /v1/chat/completions with scripted
// content wrapped in the standard response envelope. Requests that match no
// exchange get a 500 with a diagnostic body. Every received body is kept for
// later assertions.
class StubServer {
 public:
  StubServer();
  ~StubServer();
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  void add(StubExchange exchange);

  // Binds 127.0.0.1 on an ephemeral port and serves on a background thread.
  int start();
  void stop();

  int port() const { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::vector<std::string> received_bodies() const;
  int unmatched_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = 0;
};

// Loads a JSON array of exchanges: [{"prompt_substring", "content",
// "fail_status", "fail_times", "truncate", "repeatable"}]; every field but
// "content" is optional.
std::vector<StubExchange> load_stub_script(const std::string& path);

}  // namespace taforge::fixtures
