#pragma once

#include <string_view>

namespace civicpulse {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Current level; initialized once from CIVIC_PULSE_LOG (error|warn|info|debug),
/// defaulting to warn.
LogLevel log_level();
void set_log_level(LogLevel level);

void log_message(LogLevel level, std::string_view msg);

inline void log_error(std::string_view msg) { log_message(LogLevel::Error, msg); }
inline void log_warn(std::string_view msg) { log_message(LogLevel::Warn, msg); }
inline void log_info(std::string_view msg) { log_message(LogLevel::Info, msg); }
inline void log_debug(std::string_view msg) { log_message(LogLevel::Debug, msg); }

}  // namespace civicpulse
