#pragma once

#include <sstream>
#include <string>

namespace ridgecrest {

enum class LogLevel { off = 0, error = 1, info = 2, debug = 3 };

//! Current level, read once from the RIDGECREST_LOG environment variable
//! (off|error|info|debug, default error).
LogLevel log_level();

void log_message(LogLevel level, const std::string& message);

namespace detail {
template <typename... Args>
void log_fmt(LogLevel level, Args&&... args) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::ostringstream os;
  (os << ... << args);
  log_message(level, os.str());
}
}  // namespace detail

template <typename... Args>
void log_info(Args&&... args) {
  detail::log_fmt(LogLevel::info, std::forward<Args>(args)...);
}
template <typename... Args>
void log_debug(Args&&... args) {
  detail::log_fmt(LogLevel::debug, std::forward<Args>(args)...);
}
template <typename... Args>
void log_error(Args&&... args) {
  detail::log_fmt(LogLevel::error, std::forward<Args>(args)...);
}

}  // namespace ridgecrest
