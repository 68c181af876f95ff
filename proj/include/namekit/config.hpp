#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "namekit/inference.hpp"
#include "namekit/llm_client.hpp"
#include "namekit/log.hpp"

namespace namekit::config {

struct LlmSettings {
  bool mock = false;           // deterministic built-in mock instead of HTTP
  std::string mock_reply;      // fixed completion text for the mock ("" = "OK")
  std::string base_url;
  std::string model = "default";
  std::int64_t timeout_ms = 30000;
  std::size_t max_retries = 3;
  std::size_t max_in_flight = 0;
  // The credential itself always comes from the environment.
  std::string api_key_env = "NAMEKIT_LLM_API_KEY";
};

struct ServerSettings {
  std::string host = "127.0.0.1";
  int port = 8080;
  int threads = 16;
};

struct AppConfig {
  std::string dataset_path = "data/sample_names.csv";
  std::optional<std::string> variant_map_path;
  inference::FusionConfig fusion;
  LlmSettings llm;
  std::optional<std::string> username_store_path;
  std::optional<std::string> image_scorer_url;
  inference::ImageScore image_stub{dataset::Gender::female, 0.5, 1.0};
  ServerSettings server;
  log::Level log_level = log::Level::info;
  std::uint64_t rng_seed = 0;
  // Strict mode: an unreachable username store fails requests (503) instead
  // of passing candidates through with a warning.
  bool strict_availability = false;

  // Checks path existence and FusionConfig invariants. Throws ConfigError.
  void validate() const;
};

// Precedence: defaults < config file < NAMEKIT_* environment variables.
// Command-line flags are applied on top by the CLI itself.
AppConfig load_config(const std::optional<std::string>& config_file);

// Builds the configured llm client (http or mock); never returns null.
std::unique_ptr<llm::LlmClient> make_llm_client(const LlmSettings& settings);

}  // namespace namekit::config
