#include "namekit/log.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>

#include "namekit/errors.hpp"

namespace namekit::log {

namespace {
std::atomic<Level> g_level{Level::info};
std::mutex g_mutex;

const char* name_of(Level lvl) {
  switch (lvl) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warn";
    case Level::error: return "error";
  }
  return "info";
}
}  // namespace

Level level() { return g_level.load(std::memory_order_relaxed); }

void set_level(Level lvl) { g_level.store(lvl, std::memory_order_relaxed); }

Level parse_level(std::string_view name) {
  if (name == "debug") return Level::debug;
  if (name == "info") return Level::info;
  if (name == "warn" || name == "warning") return Level::warn;
  if (name == "error") return Level::error;
  throw ConfigError("unknown log level: " + std::string(name));
}

void write(Level lvl, const std::string& text) {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::fprintf(stderr, "level=%s msg=\"%s\"\n", name_of(lvl), text.c_str());
}

}  // namespace namekit::log
