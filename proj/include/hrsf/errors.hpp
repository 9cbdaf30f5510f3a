#pragma once

#include <stdexcept>
#include <string>

namespace hrsf {

/// Invalid or inconsistent configuration (bad dimensions, negative
/// latencies, missing table entries, ...). The CLI maps this to exit 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A scenario failed to terminate within its configured time limit.
/// The CLI maps this to exit 3.
class TimeoutError : public std::runtime_error {
 public:
  explicit TimeoutError(const std::string& what) : std::runtime_error(what) {}
};

/// A trace does not contain a complete departure/return cycle.
class IncompleteCycleError : public std::runtime_error {
 public:
  explicit IncompleteCycleError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace hrsf
