#ifndef NSREG_LOG_HPP
#define NSREG_LOG_HPP

#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>

namespace nsreg {

enum class LogLevel { Notice, Warning };

using LogSink = std::function<void(LogLevel, std::string_view)>;

namespace detail {

struct LogState {
    std::mutex mutex;
    LogSink sink = [](LogLevel level, std::string_view msg) {
        std::clog << "[nsreg] " << (level == LogLevel::Warning ? "warning: " : "notice: ") << msg << '\n';
    };
};

inline LogState& log_state() {
    static LogState state;
    return state;
}

} // namespace detail

/// Replace the process-wide log sink; returns the previous one. An empty sink silences output.
inline LogSink set_log_sink(LogSink sink) {
    auto& st = detail::log_state();
    std::lock_guard lock(st.mutex);
    return std::exchange(st.sink, std::move(sink));
}

inline void log(LogLevel level, std::string_view msg) {
    auto& st = detail::log_state();
    std::lock_guard lock(st.mutex);
    if (st.sink) st.sink(level, msg);
}

inline void notice(std::string_view msg) { log(LogLevel::Notice, msg); }
inline void warn(std::string_view msg) { log(LogLevel::Warning, msg); }

} // namespace nsreg

#endif
