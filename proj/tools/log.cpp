#include "log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace infogeo::cli {

namespace {

std::atomic<int>& level_slot() {
  static std::atomic<int> slot = [] {
    const char* env = std::getenv("INFOGEO_LOG");
    if (!env) return static_cast<int>(LogLevel::warn);
    const std::string v(env);
    if (v == "error") return static_cast<int>(LogLevel::error);
    if (v == "warn") return static_cast<int>(LogLevel::warn);
    if (v == "info") return static_cast<int>(LogLevel::info);
    if (v == "debug") return static_cast<int>(LogLevel::debug);
    std::cerr << "[warn] INFOGEO_LOG='" << v << "' not recognised, using warn\n";
    return static_cast<int>(LogLevel::warn);
  }();
  return slot;
}

const char* label(LogLevel l) {
  switch (l) {
    case LogLevel::error: return "error";
    case LogLevel::warn: return "warn";
    case LogLevel::info: return "info";
    case LogLevel::debug: return "debug";
  }
  return "?";
}

}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(level_slot().load()); }

void set_log_level(LogLevel level) { level_slot().store(static_cast<int>(level)); }

void log(LogLevel level, std::string_view message) {
  if (static_cast<int>(level) > level_slot().load()) return;
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::cerr << '[' << label(level) << "] " << message << '\n';
}

}  // namespace infogeo::cli
