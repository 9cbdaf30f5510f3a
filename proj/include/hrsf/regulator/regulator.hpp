#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hrsf/geometry/hull.hpp"
#include "hrsf/perception/observation.hpp"
#include "hrsf/regulator/limits.hpp"
#include "hrsf/safety/budget.hpp"

namespace hrsf {

enum class DecisionReason { NoHuman, Clear, Violation, FailedDetection };

std::string_view to_token(DecisionReason reason);

struct Violator {
  std::optional<BodyPart> part;  // empty for whole-body (class A) points
  double separation_mm = 0;
};

struct SafetyDecision {
  double commanded_velocity_mm_s = 0;
  std::vector<Violator> violating;
  double nearest_distance_mm = 0;  // +inf when no valid point was available
  DecisionReason reason = DecisionReason::NoHuman;
  std::optional<BodyPart> limiting_part;  // part whose limit was applied
};

/// Carry-over state of the regulator between evaluations. Defaults disable
/// hysteresis (immediate fallback on failure, immediate re-acceleration).
struct RegulatorState {
  int consecutive_failures = 0;
  int consecutive_clear = 0;
  double hysteresis_margin_mm = 0;
  int clear_frames_required = 1;
  int failure_frames_required = 1;
  std::optional<SafetyDecision> last_decision;

  void validate() const {
    if (hysteresis_margin_mm < 0 || clear_frames_required < 1 ||
        failure_frames_required < 1) {
      throw ConfigError("regulator hysteresis parameters out of range");
    }
  }
};

/// One SSM+PFL decision step. The hull must already be inflated by
/// Z_d + Z_r when the budget is in per-axis mode. Pure state transition:
/// identical inputs produce identical outputs.
std::pair<SafetyDecision, RegulatorState> evaluate(const BodyPointSet& points,
                                                   const Aabbd& hull,
                                                   const SeparationBudget& budget,
                                                   const VelocityLimitTable& limits,
                                                   RegulatorState state);

}  // namespace hrsf
