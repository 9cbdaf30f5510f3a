#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace hrsf {

/// Log verbosity from the HRSF_LOG environment variable:
/// error < warn (default) < info < debug.
inline int log_level() {
  static const int level = [] {
    const char* env = std::getenv("HRSF_LOG");
    if (!env) return 1;
    if (std::strcmp(env, "error") == 0) return 0;
    if (std::strcmp(env, "warn") == 0) return 1;
    if (std::strcmp(env, "info") == 0) return 2;
    if (std::strcmp(env, "debug") == 0) return 3;
    return 1;
  }();
  return level;
}

template <typename... Args>
void log_info(const char* fmt, Args... args) {
  if (log_level() >= 2) {
    std::fprintf(stderr, "[info] ");
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
  }
}

template <typename... Args>
void log_warn(const char* fmt, Args... args) {
  if (log_level() >= 1) {
    std::fprintf(stderr, "[warn] ");
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
  }
}

}  // namespace hrsf
