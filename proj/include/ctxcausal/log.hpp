#pragma once

#include <string>

namespace ctxcausal::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Level parsed once from CTXCAUSAL_LOG (error|warn|info|debug); default warn.
Level level();

void message(Level lvl, const std::string& text);

inline void error(const std::string& s) { message(Level::Error, s); }
inline void warn(const std::string& s) { message(Level::Warn, s); }
inline void info(const std::string& s) { message(Level::Info, s); }
inline void debug(const std::string& s) { message(Level::Debug, s); }

}  // namespace ctxcausal::log
