#include "ctxcausal/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace ctxcausal::log {

namespace {

Level parse_level() {
    const char* env = std::getenv("CTXCAUSAL_LOG");
    if (!env) return Level::Warn;
    const std::string v(env);
    if (v == "error") return Level::Error;
    if (v == "warn") return Level::Warn;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    return Level::Warn;
}

const char* tag(Level lvl) {
    switch (lvl) {
        case Level::Error: return "error";
        case Level::Warn: return "warn";
        case Level::Info: return "info";
        case Level::Debug: return "debug";
    }
    return "?";
}

std::mutex io_mutex;

}  // namespace

Level level() {
    static const Level lvl = parse_level();
    return lvl;
}

void message(Level lvl, const std::string& text) {
    if (lvl > level()) return;
    std::lock_guard<std::mutex> lock(io_mutex);
    std::cerr << "[" << tag(lvl) << "] " << text << "\n";
}

}  // namespace ctxcausal::log
