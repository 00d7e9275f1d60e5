#include "ridgecrest/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace ridgecrest {

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("RIDGECREST_LOG");
    if (env == nullptr) return LogLevel::error;
    std::string v(env);
    if (v == "off") return LogLevel::off;
    if (v == "info") return LogLevel::info;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::error;
  }();
  return level;
}

void log_message(LogLevel level, const std::string& message) {
  static std::mutex mu;
  const char* tag = level == LogLevel::error ? "error" : level == LogLevel::info ? "info" : "debug";
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[ridgecrest:" << tag << "] " << message << "\n";
}

}  // namespace ridgecrest
