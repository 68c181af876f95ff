#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace namekit::llm {

struct LlmRequest {
  std::string system_prompt;
  std::string user_prompt;
  double temperature = 0.7;
  std::size_t max_tokens = 512;
  std::string model;  // empty: use the client's configured model
};

struct LlmResponse {
  std::string text;
  std::chrono::milliseconds latency{0};
  std::size_t attempt = 1;
};

// Minimal chat-completion client surface shared by dataset auditing and the
// username agents.
class LlmClient {
 public:
  virtual ~LlmClient() = default;

  // Returns the first choice's text. Throws LlmUnavailableError,
  // AuthFailedError, MalformedResponseError.
  virtual LlmResponse chat_complete(const LlmRequest& request) = 0;
};

struct HttpLlmConfig {
  // Base endpoint of any OpenAI-compatible server, path prefix included,
  // e.g. "http://localhost:8000/v1". The request goes to
  // <base_url>/chat/completions.
  std::string base_url;
  std::string model = "default";
  std::string api_key;  // sent as a Bearer token when non-empty
  std::chrono::milliseconds timeout{30000};
  std::size_t max_retries = 3;  // transient failures only: timeout, 429, 5xx
  std::chrono::milliseconds backoff_base{250};
  double backoff_factor = 2.0;
  std::size_t max_in_flight = 0;  // 0: unlimited
};

class HttpLlmClient : public LlmClient {
 public:
  explicit HttpLlmClient(HttpLlmConfig config);

  LlmResponse chat_complete(const LlmRequest& request) override;

  const HttpLlmConfig& config() const { return config_; }

 private:
  class InFlightGate {
   public:
    explicit InFlightGate(std::size_t limit) : limit_(limit) {}
    void acquire();
    void release();

   private:
    std::size_t limit_;
    std::size_t in_flight_ = 0;
    std::mutex mutex_;
    std::condition_variable cv_;
  };

  HttpLlmConfig config_;
  std::string host_;         // scheme://authority
  std::string path_prefix_;  // path portion of base_url, no trailing slash
  InFlightGate gate_;
};

// Deterministic in-process stand-in: a handler maps each request to the
// completion text. The handler may throw llm errors to simulate failures.
// Thread-safe; records every request for assertions.
class MockLlmClient : public LlmClient {
 public:
  using Handler = std::function<std::string(const LlmRequest&)>;

  explicit MockLlmClient(Handler handler) : handler_(std::move(handler)) {}

  // A mock that replies with the same text to every request.
  static std::unique_ptr<MockLlmClient> echo(std::string text);

  LlmResponse chat_complete(const LlmRequest& request) override;

  std::vector<LlmRequest> calls() const;
  std::size_t call_count() const;

 private:
  Handler handler_;
  mutable std::mutex mutex_;
  std::vector<LlmRequest> calls_;
};

}  // namespace namekit::llm
