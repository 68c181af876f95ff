#pragma once

#include <sstream>
#include <string>
#include <string_view>

namespace namekit::log {

enum class Level { debug = 0, info = 1, warn = 2, error = 3 };

Level level();
void set_level(Level lvl);
Level parse_level(std::string_view name);  // throws ConfigError on bad name

// Writes "level=<lvl> msg=<text>" to stderr when lvl >= the configured level.
void write(Level lvl, const std::string& text);

template <typename... Parts>
void emit(Level lvl, Parts&&... parts) {
  if (lvl < level()) return;
  std::ostringstream os;
  (os << ... << parts);
  write(lvl, os.str());
}

template <typename... Parts>
void debug(Parts&&... parts) {
  emit(Level::debug, std::forward<Parts>(parts)...);
}
template <typename... Parts>
void info(Parts&&... parts) {
  emit(Level::info, std::forward<Parts>(parts)...);
}
template <typename... Parts>
void warn(Parts&&... parts) {
  emit(Level::warn, std::forward<Parts>(parts)...);
}
template <typename... Parts>
void error(Parts&&... parts) {
  emit(Level::error, std::forward<Parts>(parts)...);
}

}  // namespace namekit::log
