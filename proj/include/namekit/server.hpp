#pragma once

#include <memory>
#include <thread>

#include "namekit/config.hpp"
#include "namekit/fuzzy_index.hpp"
#include "namekit/inference.hpp"
#include "namekit/llm_client.hpp"
#include "namekit/nominalist.hpp"

namespace httplib {
class Server;
}

namespace namekit::server {

// HTTP/JSON front end. The name index and configuration are built once at
// startup and never mutated; request handling is concurrent.
//
//   GET  /healthz       -> {"status":"ok"}
//   POST /v1/gender     {"name": "...", "image_refs"?: [...]}
//   POST /v1/usernames  {"name": "...", "birth_year"?, "k"?, "seed"?}
class Service {
 public:
  explicit Service(config::AppConfig cfg);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds the configured host/port and serves until stop(). Returns false
  // when the socket cannot be bound.
  bool run();

  // Binds an ephemeral port and serves on a background thread; returns the
  // port. For tests and embedding.
  int start_background();
  void stop();

  const fuzzy::NameIndex& index() const { return index_; }

 private:
  void install_routes();

  config::AppConfig cfg_;
  fuzzy::NameIndex index_;  // initialized from cfg_, immutable afterwards
  std::unique_ptr<llm::LlmClient> llm_;
  std::unique_ptr<inference::ImageScorer> scorer_;
  std::unique_ptr<nominalist::UsernameStore> store_;
  std::unique_ptr<httplib::Server> http_;
  std::thread background_;
};

}  // namespace namekit::server
