#pragma once

#include <fmt/core.h>

#include <cstdio>
#include <mutex>

namespace mhsense::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3 };

namespace detail {
inline Level& threshold() {
    static Level lvl = Level::Info;
    return lvl;
}
inline std::mutex& mutex() {
    static std::mutex m;
    return m;
}
inline const char* tag(Level l) {
    switch (l) {
        case Level::Debug: return "debug";
        case Level::Info: return "info";
        case Level::Warn: return "warn";
        case Level::Error: return "error";
    }
    return "?";
}
}  // namespace detail

inline void set_level(Level lvl) { detail::threshold() = lvl; }

template <typename... Args>
void emit(Level lvl, fmt::format_string<Args...> fmt_str, Args&&... args) {
    if (lvl < detail::threshold()) return;
    std::lock_guard<std::mutex> lock(detail::mutex());
    fmt::print(stderr, "[{}] ", detail::tag(lvl));
    fmt::print(stderr, fmt_str, std::forward<Args>(args)...);
    std::fputc('\n', stderr);
}

template <typename... Args>
void debug(fmt::format_string<Args...> f, Args&&... args) {
    emit(Level::Debug, f, std::forward<Args>(args)...);
}
template <typename... Args>
void info(fmt::format_string<Args...> f, Args&&... args) {
    emit(Level::Info, f, std::forward<Args>(args)...);
}
template <typename... Args>
void warn(fmt::format_string<Args...> f, Args&&... args) {
    emit(Level::Warn, f, std::forward<Args>(args)...);
}
template <typename... Args>
void error(fmt::format_string<Args...> f, Args&&... args) {
    emit(Level::Error, f, std::forward<Args>(args)...);
}

}  // namespace mhsense::log
