#pragma once

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>

namespace psm::logging {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Level comes from the LOG_LEVEL environment variable (error|warn|info|debug);
// default is warn. Messages go to stderr; stdout stays machine-clean.
inline Level level() {
  static Level lvl = [] {
    const char* env = std::getenv("LOG_LEVEL");
    if (!env) return Level::Warn;
    std::string s(env);
    if (s == "error") return Level::Error;
    if (s == "warn") return Level::Warn;
    if (s == "info") return Level::Info;
    if (s == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return lvl;
}

inline void emit(Level lvl, const std::string& msg) {
  if (lvl > level()) return;
  static std::mutex mu;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[" << names[static_cast<int>(lvl)] << "] " << msg << "\n";
}

inline void error(const std::string& msg) { emit(Level::Error, msg); }
inline void warn(const std::string& msg) { emit(Level::Warn, msg); }
inline void info(const std::string& msg) { emit(Level::Info, msg); }
inline void debug(const std::string& msg) { emit(Level::Debug, msg); }

}  // namespace psm::logging
