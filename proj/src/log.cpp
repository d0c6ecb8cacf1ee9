#include "civicpulse/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

#include "civicpulse/text.hpp"

namespace civicpulse {

namespace {

LogLevel g_level = LogLevel::Warn;
std::once_flag g_init;
std::mutex g_mutex;

const char* level_name(LogLevel level) {
    switch (level) {
        case LogLevel::Error: return "error";
        case LogLevel::Warn: return "warn";
        case LogLevel::Info: return "info";
        case LogLevel::Debug: return "debug";
    }
    return "?";
}

void init_from_env() {
    const char* env = std::getenv("CIVIC_PULSE_LOG");
    if (!env) return;
    std::string v = ascii_lower(env);
    if (v == "error") {
        g_level = LogLevel::Error;
    } else if (v == "warn") {
        g_level = LogLevel::Warn;
    } else if (v == "info") {
        g_level = LogLevel::Info;
    } else if (v == "debug") {
        g_level = LogLevel::Debug;
    } else if (!v.empty()) {
        std::cerr << "[warn] unrecognized CIVIC_PULSE_LOG value '" << env << "', using 'warn'\n";
    }
}

}  // namespace

LogLevel log_level() {
    std::call_once(g_init, init_from_env);
    return g_level;
}

void set_log_level(LogLevel level) {
    std::call_once(g_init, init_from_env);
    g_level = level;
}

void log_message(LogLevel level, std::string_view message) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::cerr << "[" << level_name(level) << "] " << message << "\n";
}

}  // namespace civicpulse
