#pragma once

#include <string>

namespace typomap::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Quiet = 3 };

// Global threshold; messages below it are dropped. Tests set Quiet.
void set_level(Level level);
Level level();

void info(const std::string& msg);
void warn(const std::string& msg);
void debug(const std::string& msg);

} // namespace typomap::log
