#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace ctraj::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

// Controlled by the CENTRAL_TRAJ_LOG environment variable
// (error|warn|info|debug); defaults to warn.
inline Level threshold() {
    static const Level lvl = [] {
        const char* env = std::getenv("CENTRAL_TRAJ_LOG");
        if (!env) return Level::warn;
        if (std::strcmp(env, "error") == 0) return Level::error;
        if (std::strcmp(env, "info") == 0) return Level::info;
        if (std::strcmp(env, "debug") == 0) return Level::debug;
        return Level::warn;
    }();
    return lvl;
}

inline void write(Level lvl, const std::string& msg) {
    if (lvl > threshold()) return;
    const char* tag = lvl == Level::error ? "error" : lvl == Level::warn ? "warn" : lvl == Level::info ? "info" : "debug";
    std::fprintf(stderr, "[central-traj %s] %s\n", tag, msg.c_str());
}

inline void error(const std::string& msg) { write(Level::error, msg); }
inline void warn(const std::string& msg) { write(Level::warn, msg); }
inline void info(const std::string& msg) { write(Level::info, msg); }
inline void debug(const std::string& msg) { write(Level::debug, msg); }

} // namespace ctraj::log
