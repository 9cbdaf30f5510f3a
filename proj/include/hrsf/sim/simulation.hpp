#pragma once

#include <cstdint>

#include "hrsf/config/scenario.hpp"
#include "hrsf/sim/trace.hpp"

namespace hrsf {

enum class BaselineKind { None, LaserScanner, FixedLowestSpeed };

struct SimResult {
  std::vector<TraceRecord> trace;
  TraceSummary summary;
};

/// Deterministic fixed-step replay of the work cell with the configured
/// perception method in the loop. Throws TimeoutError if the trajectory
/// does not finish within config.sim.timeout_s of simulated time.
SimResult run_scenario(const ScenarioConfig& config, std::uint64_t seed);
inline SimResult run_scenario(const ScenarioConfig& config) {
  return run_scenario(config, config.sim.seed);
}

/// Same cell driven by one of the two reference safety setups.
SimResult run_baseline(const ScenarioConfig& config, BaselineKind kind,
                       std::uint64_t seed);

TraceSummary laser_scanner_baseline(const ScenarioConfig& config, std::uint64_t seed);
TraceSummary fixed_speed_baseline(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace hrsf
