#include "namekit/server.hpp"

#include <httplib.h>

#include <json.hpp>

#include "namekit/errors.hpp"
#include "namekit/json_io.hpp"
#include "namekit/log.hpp"

namespace namekit::server {

using nlohmann::json;

namespace {

void reply_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply_json(res, status, json{{"error", message}});
}

// Parses the request body as a JSON object and extracts a non-empty "name";
// replies 400 and returns nullopt on any schema violation.
std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    reply_error(res, 400, "request body must be a JSON object");
    return std::nullopt;
  }
  if (!body.contains("name") || !body["name"].is_string() ||
      body["name"].get<std::string>().empty()) {
    reply_error(res, 400, "field 'name' (non-empty string) is required");
    return std::nullopt;
  }
  return body;
}

}  // namespace

namespace {

fuzzy::NameIndex make_index(const config::AppConfig& cfg) {
  cfg.validate();
  dataset::LoadOptions load_options;
  load_options.format = dataset::format_from_path(cfg.dataset_path);
  normalization::VariantTable table;
  if (cfg.variant_map_path) {
    table = normalization::VariantTable::load_file(*cfg.variant_map_path);
    load_options.variant_table = &table;
  }
  dataset::LoadResult loaded = dataset::load_records(cfg.dataset_path, load_options);
  for (const auto& issue : loaded.issues) {
    log::warn("dataset row skipped (line ", issue.line, "): ", issue.reason);
  }
  dataset::MergeResult merged = dataset::merge_and_dedupe({loaded.records});
  return fuzzy::NameIndex::build(std::move(merged.records));
}

}  // namespace

Service::Service(config::AppConfig cfg)
    : cfg_(std::move(cfg)), index_(make_index(cfg_)) {
  llm_ = config::make_llm_client(cfg_.llm);
  if (cfg_.image_scorer_url) {
    scorer_ = std::make_unique<inference::HttpImageScorer>(*cfg_.image_scorer_url);
  } else {
    scorer_ = std::make_unique<inference::StubImageScorer>(cfg_.image_stub);
  }
  if (cfg_.username_store_path) {
    store_ = std::make_unique<nominalist::FileUsernameStore>(*cfg_.username_store_path);
  }

  http_ = std::make_unique<httplib::Server>();
  const int threads = std::max(2, cfg_.server.threads);
  http_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  install_routes();
}

Service::~Service() { stop(); }

void Service::install_routes() {
  http_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    reply_json(res, 200, json{{"status", "ok"}});
  });

  http_->Post("/v1/gender", [this](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res);
    if (!body) return;
    std::vector<std::string> image_refs;
    if (body->contains("image_refs")) {
      if (!(*body)["image_refs"].is_array()) {
        reply_error(res, 400, "field 'image_refs' must be an array of strings");
        return;
      }
      for (const auto& ref : (*body)["image_refs"]) {
        if (!ref.is_string()) {
          reply_error(res, 400, "field 'image_refs' must be an array of strings");
          return;
        }
        image_refs.push_back(ref.get<std::string>());
      }
    }
    try {
      inference::GenderEstimate name_estimate =
          inference::infer_from_name(index_, body->at("name").get<std::string>(), cfg_.fusion);
      inference::GenderEstimate fused = inference::fuse(
          name_estimate,
          [this, &image_refs]() -> inference::GenderEstimate {
            if (image_refs.empty()) {
              throw ImageUnavailableError("no image references in request");
            }
            return inference::aggregate_image_scores(scorer_->score(image_refs),
                                                     cfg_.fusion.tie_label);
          },
          cfg_.fusion);
      reply_json(res, 200, json(fused));
    } catch (const EmptyQueryError& e) {
      reply_error(res, 400, e.what());
    } catch (const Error& e) {
      reply_error(res, 503, e.what());
    }
  });

  http_->Post("/v1/usernames", [this](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req, res);
    if (!body) return;
    nominalist::GenerationContext ctx;
    ctx.input_name = body->at("name").get<std::string>();
    ctx.rng_seed = cfg_.rng_seed;
    try {
      if (body->contains("birth_year")) ctx.birth_year = body->at("birth_year").get<int>();
      if (body->contains("seed")) ctx.rng_seed = body->at("seed").get<std::uint64_t>();
    } catch (const json::exception&) {
      reply_error(res, 400, "birth_year and seed must be integers");
      return;
    }
    std::size_t k = 5;
    if (body->contains("k")) {
      if (!(*body)["k"].is_number_unsigned() || (*body)["k"].get<std::uint64_t>() == 0) {
        reply_error(res, 400, "field 'k' must be a positive integer");
        return;
      }
      k = (*body)["k"].get<std::size_t>();
    }
    nominalist::SuggestOptions options;
    options.k = k;
    options.store_policy = cfg_.strict_availability
                               ? nominalist::StoreFailurePolicy::fail
                               : nominalist::StoreFailurePolicy::pass_through;
    try {
      std::vector<nominalist::UsernameCandidate> ranked = nominalist::suggest(
          ctx, &index_, llm_.get(), store_.get(), options);
      reply_json(res, 200, json{{"candidates", ranked}});
    } catch (const UnresolvableNameError& e) {
      reply_error(res, 400, e.what());
    } catch (const StoreUnavailableError& e) {
      reply_error(res, 503, e.what());
    } catch (const Error& e) {
      reply_error(res, 503, e.what());
    }
  });
}

bool Service::run() {
  log::info("serving on ", cfg_.server.host, ":", cfg_.server.port);
  return http_->listen(cfg_.server.host, cfg_.server.port);
}

int Service::start_background() {
  int port = http_->bind_to_any_port(cfg_.server.host);
  if (port <= 0) throw Error("cannot bind server socket");
  background_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port;
}

void Service::stop() {
  if (http_) http_->stop();
  if (background_.joinable()) background_.join();
}

}  // namespace namekit::server
