#include "namekit/llm_client.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "namekit/errors.hpp"
#include "namekit/log.hpp"

namespace namekit::llm {

namespace {

void validate(const LlmRequest& request) {
  if (request.system_prompt.empty() || request.user_prompt.empty()) {
    throw std::invalid_argument("llm prompts must be non-empty");
  }
  if (!std::isfinite(request.temperature) || request.temperature < 0.0 ||
      request.temperature > 2.0) {
    throw std::invalid_argument("llm temperature must be finite and in [0,2]");
  }
}

// Splits "scheme://authority/path" into the client target and path prefix.
void split_base_url(const std::string& base_url, std::string& host,
                    std::string& prefix) {
  auto scheme_end = base_url.find("://");
  std::size_t authority_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  auto path_start = base_url.find('/', authority_start);
  if (path_start == std::string::npos) {
    host = base_url;
    prefix.clear();
  } else {
    host = base_url.substr(0, path_start);
    prefix = base_url.substr(path_start);
  }
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
}

}  // namespace

void HttpLlmClient::InFlightGate::acquire() {
  if (limit_ == 0) return;
  std::unique_lock<std::mutex> lock(mutex_);
  cv_.wait(lock, [&] { return in_flight_ < limit_; });
  ++in_flight_;
}

void HttpLlmClient::InFlightGate::release() {
  if (limit_ == 0) return;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    --in_flight_;
  }
  cv_.notify_one();
}

HttpLlmClient::HttpLlmClient(HttpLlmConfig config)
    : config_(std::move(config)), gate_(config_.max_in_flight) {
  if (config_.base_url.empty()) {
    throw ConfigError("llm base_url is not configured");
  }
  split_base_url(config_.base_url, host_, path_prefix_);
}

LlmResponse HttpLlmClient::chat_complete(const LlmRequest& request) {
  validate(request);

  nlohmann::json body{
      {"model", request.model.empty() ? config_.model : request.model},
      {"messages",
       {{{"role", "system"}, {"content", request.system_prompt}},
        {{"role", "user"}, {"content", request.user_prompt}}}},
      {"temperature", request.temperature},
      {"max_tokens", request.max_tokens},
  };
  const std::string payload = body.dump();
  const std::string path = path_prefix_ + "/chat/completions";

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  gate_.acquire();
  struct GateRelease {
    InFlightGate& gate;
    ~GateRelease() { gate.release(); }
  } release_on_exit{gate_};

  std::string last_failure = "no attempt made";
  for (std::size_t attempt = 1; attempt <= config_.max_retries + 1; ++attempt) {
    httplib::Client client(host_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);

    auto started = std::chrono::steady_clock::now();
    httplib::Result result =
        client.Post(path, headers, payload, "application/json");
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);

    bool retryable = false;
    if (!result) {
      last_failure = "transport error: " + httplib::to_string(result.error());
      retryable = true;
    } else if (result->status == 200) {
      nlohmann::json doc = nlohmann::json::parse(result->body, nullptr, false);
      if (doc.is_discarded()) {
        throw MalformedResponseError("response body is not JSON");
      }
      if (!doc.contains("choices") || !doc["choices"].is_array() ||
          doc["choices"].empty()) {
        throw MalformedResponseError("response has no choices");
      }
      const auto& first = doc["choices"][0];
      if (!first.contains("message") || !first["message"].contains("content") ||
          !first["message"]["content"].is_string()) {
        throw MalformedResponseError("first choice has no message content");
      }
      return {first["message"]["content"].get<std::string>(), elapsed, attempt};
    } else if (result->status == 401 || result->status == 403) {
      throw AuthFailedError("HTTP " + std::to_string(result->status));
    } else if (result->status == 429 || result->status >= 500) {
      last_failure = "HTTP " + std::to_string(result->status);
      retryable = true;
    } else {
      throw LlmError("llm request rejected: HTTP " +
                     std::to_string(result->status));
    }

    if (retryable && attempt <= config_.max_retries) {
      auto delay = std::chrono::milliseconds(static_cast<std::int64_t>(
          static_cast<double>(config_.backoff_base.count()) *
          std::pow(config_.backoff_factor, static_cast<double>(attempt - 1))));
      log::debug("llm retry ", attempt, " after ", last_failure, ", backoff ",
                 delay.count(), "ms");
      std::this_thread::sleep_for(delay);
    }
  }
  throw LlmUnavailableError(last_failure + " after " +
                            std::to_string(config_.max_retries + 1) +
                            " attempts");
}

std::unique_ptr<MockLlmClient> MockLlmClient::echo(std::string text) {
  return std::make_unique<MockLlmClient>(
      [text = std::move(text)](const LlmRequest&) { return text; });
}

LlmResponse MockLlmClient::chat_complete(const LlmRequest& request) {
  validate(request);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    calls_.push_back(request);
  }
  return {handler_(request), std::chrono::milliseconds(0), 1};
}

std::vector<LlmRequest> MockLlmClient::calls() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return calls_;
}

std::size_t MockLlmClient::call_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return calls_.size();
}

}  // namespace namekit::llm
