#pragma once

#include <functional>
#include <string>

namespace iprior {

enum class LogLevel { kInfo, kWarning, kError };

// Diagnostics go to stderr unless a sink is installed (tests capture them).
using LogSink = std::function<void(LogLevel, const std::string&)>;

void set_log_sink(LogSink sink);
void log(LogLevel level, const std::string& message);
inline void log_warning(const std::string& message) { log(LogLevel::kWarning, message); }
inline void log_info(const std::string& message) { log(LogLevel::kInfo, message); }

}  // namespace iprior
