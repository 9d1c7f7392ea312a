#include "scalegraph/log.hpp"

#include <cstdio>
#include <cstdlib>

namespace scalegraph::log {

namespace {

Level parse_env() {
    const char* raw = std::getenv("SCALEGRAPH_LOG");
    if (raw == nullptr) return Level::Warn;
    std::string v(raw);
    if (v == "quiet") return Level::Quiet;
    if (v == "error") return Level::Error;
    if (v == "warn") return Level::Warn;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    return Level::Warn;
}

Level& current() {
    static Level lvl = parse_env();
    return lvl;
}

void emit(Level lvl, const char* tag, const std::string& msg) {
    if (current() >= lvl) std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}

} // namespace

Level level() { return current(); }
void set_level(Level lvl) { current() = lvl; }

void error(const std::string& msg) { emit(Level::Error, "error", msg); }
void warn(const std::string& msg) { emit(Level::Warn, "warn", msg); }
void info(const std::string& msg) { emit(Level::Info, "info", msg); }
void debug(const std::string& msg) { emit(Level::Debug, "debug", msg); }

} // namespace scalegraph::log
