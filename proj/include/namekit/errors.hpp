#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace namekit {

// Base class for all domain errors raised by the toolkit. CLI and service
// layers map these to exit code 1 / HTTP error responses.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class FileNotFoundError : public Error {
 public:
  explicit FileNotFoundError(const std::string& path)
      : Error("file not found: " + path) {}
};

class EncodingError : public Error {
 public:
  explicit EncodingError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("parse error at line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(reason) {}

  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class EmptyDatasetError : public Error {
 public:
  EmptyDatasetError() : Error("dataset is empty") {}
};

class EvenKError : public Error {
 public:
  explicit EvenKError(std::size_t k)
      : Error("k must be odd and >= 1, got " + std::to_string(k)) {}
};

class EmptyQueryError : public Error {
 public:
  EmptyQueryError() : Error("query is empty after normalization") {}
};

class NoScoresError : public Error {
 public:
  NoScoresError() : Error("image score list is empty") {}
};

class ImageUnavailableError : public Error {
 public:
  explicit ImageUnavailableError(const std::string& why)
      : Error("image channel unavailable: " + why) {}
};

// LLM client failure classes. UnavailableError means transient failures
// exhausted the retry budget; AuthFailedError and MalformedResponseError are
// never retried.
class LlmError : public Error {
 public:
  explicit LlmError(const std::string& what) : Error(what) {}
};

class LlmUnavailableError : public LlmError {
 public:
  explicit LlmUnavailableError(const std::string& why)
      : LlmError("llm unavailable: " + why) {}
};

class AuthFailedError : public LlmError {
 public:
  explicit AuthFailedError(const std::string& why)
      : LlmError("llm authentication failed: " + why) {}
};

class MalformedResponseError : public LlmError {
 public:
  explicit MalformedResponseError(const std::string& why)
      : LlmError("malformed llm response: " + why) {}
};

class StoreUnavailableError : public Error {
 public:
  explicit StoreUnavailableError(const std::string& why)
      : Error("username store unavailable: " + why) {}
};

class UnresolvableNameError : public Error {
 public:
  explicit UnresolvableNameError(const std::string& name)
      : Error("no latin base derivable for name: " + name) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error("configuration error: " + what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(what) {}
};

}  // namespace namekit
