#pragma once

#include <stdexcept>
#include <string>

namespace taforge {

// Process exit codes, shared between the library error types and the CLI.
enum class ExitCode : int {
  ok = 0,
  validation = 2,
  backend = 3,
  hallucination = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

// Bad configuration, malformed input files, unparseable model responses.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ExitCode::validation, what) {}
};

// Transport failures, exhausted retries, replay misses, truncated responses.
class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what) : Error(ExitCode::backend, what) {}
};

// A model response referenced an index outside the input set.
class HallucinationError : public Error {
 public:
  explicit HallucinationError(const std::string& what) : Error(ExitCode::hallucination, what) {}
};

}  // namespace taforge
