#include "typomap/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace typomap::log {

namespace {
std::atomic<Level> g_level{Level::Info};
std::mutex g_mutex;

void emit(const char* tag, const std::string& msg) {
    std::lock_guard<std::mutex> lock(g_mutex);
    std::cerr << tag << msg << '\n';
}
} // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

void debug(const std::string& msg) {
    if (g_level.load() <= Level::Debug) emit("[debug] ", msg);
}

void info(const std::string& msg) {
    if (g_level.load() <= Level::Info) emit("[info] ", msg);
}

void warn(const std::string& msg) {
    if (g_level.load() <= Level::Warn) emit("[warn] ", msg);
}

} // namespace typomap::log
