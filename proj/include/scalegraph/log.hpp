#pragma once

#include <string>

namespace scalegraph::log {

enum class Level { Quiet = 0, Error = 1, Warn = 2, Info = 3, Debug = 4 };

// Initial level comes from the SCALEGRAPH_LOG environment variable
// (quiet|error|warn|info|debug); the default is warn.
Level level();
void set_level(Level lvl);

void error(const std::string& msg);
void warn(const std::string& msg);
void info(const std::string& msg);
void debug(const std::string& msg);

} // namespace scalegraph::log
