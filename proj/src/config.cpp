#include "namekit/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "namekit/errors.hpp"

namespace namekit::config {

namespace {

std::optional<std::string> env(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

void apply_file(AppConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(path + ": top level must be an object");

  try {
    if (doc.contains("dataset")) cfg.dataset_path = doc["dataset"].get<std::string>();
    if (doc.contains("variant_map")) cfg.variant_map_path = doc["variant_map"].get<std::string>();
    if (doc.contains("username_store")) cfg.username_store_path = doc["username_store"].get<std::string>();
    if (doc.contains("image_scorer_url")) cfg.image_scorer_url = doc["image_scorer_url"].get<std::string>();
    if (doc.contains("log_level")) cfg.log_level = log::parse_level(doc["log_level"].get<std::string>());
    if (doc.contains("rng_seed")) cfg.rng_seed = doc["rng_seed"].get<std::uint64_t>();
    if (doc.contains("strict_availability")) cfg.strict_availability = doc["strict_availability"].get<bool>();

    if (doc.contains("fusion")) {
      const auto& f = doc["fusion"];
      if (f.contains("k")) cfg.fusion.k = f["k"].get<std::size_t>();
      if (f.contains("confidence_threshold")) cfg.fusion.confidence_threshold = f["confidence_threshold"].get<double>();
      if (f.contains("name_weight")) cfg.fusion.name_weight = f["name_weight"].get<double>();
      if (f.contains("image_weight")) cfg.fusion.image_weight = f["image_weight"].get<double>();
      if (f.contains("similarity_weighted_vote")) cfg.fusion.similarity_weighted_vote = f["similarity_weighted_vote"].get<bool>();
      if (f.contains("tie_label")) cfg.fusion.tie_label = dataset::gender_from_string(f["tie_label"].get<std::string>());
      if (f.contains("image_timeout_ms")) cfg.fusion.image_timeout = std::chrono::milliseconds(f["image_timeout_ms"].get<std::int64_t>());
    }
    if (doc.contains("llm")) {
      const auto& l = doc["llm"];
      if (l.contains("mock")) cfg.llm.mock = l["mock"].get<bool>();
      if (l.contains("mock_reply")) cfg.llm.mock_reply = l["mock_reply"].get<std::string>();
      if (l.contains("base_url")) cfg.llm.base_url = l["base_url"].get<std::string>();
      if (l.contains("model")) cfg.llm.model = l["model"].get<std::string>();
      if (l.contains("timeout_ms")) cfg.llm.timeout_ms = l["timeout_ms"].get<std::int64_t>();
      if (l.contains("max_retries")) cfg.llm.max_retries = l["max_retries"].get<std::size_t>();
      if (l.contains("max_in_flight")) cfg.llm.max_in_flight = l["max_in_flight"].get<std::size_t>();
      if (l.contains("api_key_env")) cfg.llm.api_key_env = l["api_key_env"].get<std::string>();
    }
    if (doc.contains("image_stub")) {
      const auto& s = doc["image_stub"];
      if (s.contains("gender")) cfg.image_stub.gender = dataset::gender_from_string(s["gender"].get<std::string>());
      if (s.contains("probability")) cfg.image_stub.probability = s["probability"].get<double>();
      if (s.contains("weight")) cfg.image_stub.weight = s["weight"].get<double>();
    }
    if (doc.contains("server")) {
      const auto& s = doc["server"];
      if (s.contains("host")) cfg.server.host = s["host"].get<std::string>();
      if (s.contains("port")) cfg.server.port = s["port"].get<int>();
      if (s.contains("threads")) cfg.server.threads = s["threads"].get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void apply_env(AppConfig& cfg) {
  if (auto v = env("NAMEKIT_DATASET")) cfg.dataset_path = *v;
  if (auto v = env("NAMEKIT_VARIANT_MAP")) cfg.variant_map_path = *v;
  if (auto v = env("NAMEKIT_STORE")) cfg.username_store_path = *v;
  if (auto v = env("NAMEKIT_IMAGE_SCORER_URL")) cfg.image_scorer_url = *v;
  if (auto v = env("NAMEKIT_LLM_BASE_URL")) cfg.llm.base_url = *v;
  if (auto v = env("NAMEKIT_LLM_MODEL")) cfg.llm.model = *v;
  if (auto v = env("NAMEKIT_HOST")) cfg.server.host = *v;
  if (auto v = env("NAMEKIT_PORT")) cfg.server.port = std::stoi(*v);
  if (auto v = env("NAMEKIT_LOG_LEVEL")) cfg.log_level = log::parse_level(*v);
  if (auto v = env("NAMEKIT_SEED")) cfg.rng_seed = std::stoull(*v);
}

}  // namespace

void AppConfig::validate() const {
  fusion.validate();
  if (!std::filesystem::exists(dataset_path)) {
    throw ConfigError("dataset path does not exist: " + dataset_path);
  }
  if (variant_map_path && !std::filesystem::exists(*variant_map_path)) {
    throw ConfigError("variant map path does not exist: " + *variant_map_path);
  }
  if (username_store_path && !std::filesystem::exists(*username_store_path)) {
    throw ConfigError("username store path does not exist: " + *username_store_path);
  }
  if (server.port < 0 || server.port > 65535) {
    throw ConfigError("server port out of range");
  }
  if (!llm.mock && !llm.base_url.empty() &&
      llm.base_url.rfind("http", 0) != 0) {
    throw ConfigError("llm base_url must start with http:// or https://");
  }
}

AppConfig load_config(const std::optional<std::string>& config_file) {
  AppConfig cfg;
  if (config_file) apply_file(cfg, *config_file);
  apply_env(cfg);
  return cfg;
}

namespace {

// Deterministic stand-in for a chat endpoint: answers each of the toolkit's
// prompt shapes sensibly so offline pipelines stay usable and reproducible.
std::string scripted_mock_reply(const llm::LlmRequest& request) {
  const std::string& prompt = request.user_prompt;

  if (prompt.rfind("Audit the following", 0) == 0) {
    // One "OK" per numbered record line.
    std::size_t records = 0;
    std::istringstream in(prompt);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find(". persian=") != std::string::npos) ++records;
    }
    std::string out;
    for (std::size_t i = 1; i <= records; ++i) {
      out += std::to_string(i) + ": OK\n";
    }
    return out;
  }

  if (prompt.rfind("Suggest 6 creative username variants", 0) == 0) {
    std::string base = "user";
    std::size_t open = prompt.find('"');
    std::size_t close = open == std::string::npos ? std::string::npos
                                                  : prompt.find('"', open + 1);
    if (close != std::string::npos) base = prompt.substr(open + 1, close - open - 1);
    base = base.substr(0, 14);
    std::string out;
    for (const char* suffix : {"_pro", "_app", "_hub", "_lab", "_net", "_est"}) {
      out += base + suffix + "\n";
    }
    return out;
  }

  if (prompt.rfind("Rate each username", 0) == 0) {
    // Stable pseudo-scores derived from each candidate value (FNV-1a), so
    // rankings do not depend on candidate order.
    std::string out;
    std::istringstream in(prompt);
    std::string line;
    std::size_t index = 0;
    bool in_list = false;
    while (std::getline(in, line)) {
      if (!in_list) {
        in_list = line.rfind("1. ", 0) == 0;
        if (!in_list) continue;
      }
      std::size_t dot = line.find(". ");
      if (dot == std::string::npos) continue;
      std::string value = line.substr(dot + 2);
      std::uint64_t hash = 1469598103934665603ull;
      for (char c : value) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ull;
      }
      ++index;
      out += std::to_string(index);
      out += ".";
      for (int d = 0; d < 5; ++d) {
        out += " 0." + std::to_string((hash >> (d * 8)) % 10);
      }
      out += "\n";
    }
    return out;
  }

  return "OK";
}

}  // namespace

std::unique_ptr<llm::LlmClient> make_llm_client(const LlmSettings& settings) {
  if (settings.mock || settings.base_url.empty()) {
    if (!settings.mock_reply.empty()) {
      return llm::MockLlmClient::echo(settings.mock_reply);
    }
    return std::make_unique<llm::MockLlmClient>(scripted_mock_reply);
  }
  llm::HttpLlmConfig http;
  http.base_url = settings.base_url;
  http.model = settings.model;
  http.timeout = std::chrono::milliseconds(settings.timeout_ms);
  http.max_retries = settings.max_retries;
  http.max_in_flight = settings.max_in_flight;
  if (const char* key = std::getenv(settings.api_key_env.c_str())) {
    http.api_key = key;
  }
  return std::make_unique<llm::HttpLlmClient>(std::move(http));
}

}  // namespace namekit::config
