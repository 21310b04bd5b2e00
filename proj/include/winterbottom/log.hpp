#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace wb {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Level comes from WINTERBOTTOM_LOG in {error, info, debug}; default error.
inline LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("WINTERBOTTOM_LOG");
    if (env == nullptr) return LogLevel::Error;
    if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::Info;
    return LogLevel::Error;
  }();
  return level;
}

inline void log_msg(LogLevel lvl, const std::string& msg) {
  if (static_cast<int>(lvl) <= static_cast<int>(log_level())) {
    const char* tag = lvl == LogLevel::Error ? "error" : (lvl == LogLevel::Info ? "info" : "debug");
    std::fprintf(stderr, "[winterbottom %s] %s\n", tag, msg.c_str());
  }
}

inline void log_error(const std::string& msg) { log_msg(LogLevel::Error, msg); }
inline void log_info(const std::string& msg) { log_msg(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log_msg(LogLevel::Debug, msg); }

}  // namespace wb
