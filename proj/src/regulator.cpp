#include "hrsf/regulator/regulator.hpp"

#include <algorithm>
#include <limits>

namespace hrsf {

std::string_view to_token(DecisionReason reason) {
  switch (reason) {
    case DecisionReason::NoHuman: return "no_human";
    case DecisionReason::Clear: return "clear";
    case DecisionReason::Violation: return "violation";
    case DecisionReason::FailedDetection: return "failed_detection";
  }
  return "unknown";
}

namespace {

double held_velocity(const RegulatorState& state, double fallback) {
  return state.last_decision ? state.last_decision->commanded_velocity_mm_s : fallback;
}

}  // namespace

std::pair<SafetyDecision, RegulatorState> evaluate(const BodyPointSet& points,
                                                   const Aabbd& hull,
                                                   const SeparationBudget& budget,
                                                   const VelocityLimitTable& limits,
                                                   RegulatorState state) {
  state.validate();
  limits.validate();

  SafetyDecision decision;
  decision.nearest_distance_mm = std::numeric_limits<double>::infinity();

  if (!points.human_present) {
    decision.reason = DecisionReason::NoHuman;
    decision.commanded_velocity_mm_s = limits.full_speed_mm_s;
    state.consecutive_failures = 0;
    state.consecutive_clear = std::max(state.consecutive_clear, state.clear_frames_required);
    state.last_decision = decision;
    return {decision, state};
  }

  if (points.points.empty()) {
    // Failed identification: a human was reported but nothing could be
    // localized. Fall back to the most restrictive limit once the failure
    // has persisted long enough; hold the previous command before that.
    state.consecutive_clear = 0;
    state.consecutive_failures += 1;
    decision.reason = DecisionReason::FailedDetection;
    if (state.consecutive_failures >= state.failure_frames_required) {
      decision.commanded_velocity_mm_s = limits.global_min();
    } else {
      decision.commanded_velocity_mm_s =
          std::min(held_velocity(state, limits.global_min()), limits.full_speed_mm_s);
    }
    state.last_decision = decision;
    return {decision, state};
  }

  state.consecutive_failures = 0;

  const double threshold = budget.scalar_threshold_mm;
  double min_limit = std::numeric_limits<double>::infinity();
  for (const auto& point : points.points) {
    const double dist = point_hull_distance(point.position_mm, hull);
    decision.nearest_distance_mm = std::min(decision.nearest_distance_mm, dist);
    if (dist >= threshold) continue;
    decision.violating.push_back({point.part, dist});
    const double limit = point.part ? limits.limit_for(*point.part) : limits.global_min();
    if (limit < min_limit) {
      min_limit = limit;
      decision.limiting_part = point.part;
    }
  }

  if (!decision.violating.empty()) {
    decision.reason = DecisionReason::Violation;
    decision.commanded_velocity_mm_s = min_limit;
    state.consecutive_clear = 0;
    state.last_decision = decision;
    return {decision, state};
  }

  decision.reason = DecisionReason::Clear;
  if (decision.nearest_distance_mm >= threshold + state.hysteresis_margin_mm) {
    state.consecutive_clear += 1;
  } else {
    state.consecutive_clear = 0;  // inside the hysteresis band
  }
  if (state.consecutive_clear >= state.clear_frames_required) {
    decision.commanded_velocity_mm_s = limits.full_speed_mm_s;
  } else {
    decision.commanded_velocity_mm_s =
        std::min(held_velocity(state, limits.full_speed_mm_s), limits.full_speed_mm_s);
  }
  state.last_decision = decision;
  return {decision, state};
}

}  // namespace hrsf
