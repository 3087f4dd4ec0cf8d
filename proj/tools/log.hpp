#pragma once

#include <string_view>

namespace infogeo::cli {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

/// Level from INFOGEO_LOG ("error" | "warn" | "info" | "debug"); defaults to
/// warn. Unknown values fall back to warn with a notice.
LogLevel log_level();
void set_log_level(LogLevel level);

/// Writes "[level] message" to stderr when `level` is enabled. Thread-safe.
void log(LogLevel level, std::string_view message);

}  // namespace infogeo::cli
