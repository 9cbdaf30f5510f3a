#include "hrsf/safety/budget.hpp"

#include <algorithm>
#include <cmath>

namespace hrsf {

std::string method_name(Method m) {
  switch (m) {
    case Method::BodyRecognition: return "BodyRecognition";
    case Method::PoseEstimation: return "PoseEstimation";
    case Method::BodySegmentation: return "BodySegmentation";
    case Method::BodyPartSegmentation: return "BodyPartSegmentation";
  }
  return "unknown";
}

std::optional<Method> method_from_name(const std::string& name) {
  for (Method m : {Method::BodyRecognition, Method::PoseEstimation,
                   Method::BodySegmentation, Method::BodyPartSegmentation}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

ExtractionClass method_class(Method m) {
  switch (m) {
    case Method::BodyRecognition:
    case Method::BodySegmentation:
      return ExtractionClass::A;
    case Method::PoseEstimation:
    case Method::BodyPartSegmentation:
      return ExtractionClass::B;
  }
  return ExtractionClass::A;
}

std::vector<MethodProfile> builtin_profiles() {
  return {
      {Method::BodyRecognition, 370.0, Vec3d(346, 767, 399)},
      {Method::PoseEstimation, 305.0, Vec3d(131, 57, 206)},
      {Method::BodySegmentation, 559.0, Vec3d(346, 416, 334)},
      {Method::BodyPartSegmentation, 812.0, Vec3d(87, 71, 151)},
  };
}

MethodProfile builtin_profile(Method m) {
  for (const auto& profile : builtin_profiles()) {
    if (profile.method == m) return profile;
  }
  throw ConfigError("no builtin profile for " + method_name(m));
}

double compute_Sh(double t_lat_max_ms, const HumanSpeedPolicy& policy,
                  std::optional<double> current_distance_mm) {
  if (!(t_lat_max_ms >= 0)) throw ConfigError("t_lat_max_ms must be >= 0");
  return policy.human_speed(current_distance_mm) * t_lat_max_ms / 1000.0;
}

double compute_C(double detection_capacity_mm) {
  if (!(detection_capacity_mm >= 0)) {
    throw ConfigError("detection capacity must be >= 0");
  }
  return std::max(0.0, 8.0 * (detection_capacity_mm - 14.0));
}

double s_r_from_query_latency(double t_query_ms, double v_robot_max_mm_s) {
  if (!(t_query_ms >= 0) || !(v_robot_max_mm_s >= 0)) {
    throw ConfigError("query latency and robot speed must be >= 0");
  }
  return t_query_ms * v_robot_max_mm_s / 1000.0;
}

SeparationBudget compute_budget(const MethodProfile& profile,
                                const SafetyConstants& consts,
                                const HumanSpeedPolicy& policy,
                                std::optional<double> current_distance_mm,
                                UncertaintyMode mode) {
  profile.validate();
  consts.validate();
  policy.validate();

  SeparationBudget budget;
  budget.s_h_mm = compute_Sh(profile.t_lat_max_ms, policy, current_distance_mm);
  budget.s_r_mm = consts.s_r_mm;
  budget.c_mm = compute_C(consts.detection_capacity_mm);
  budget.z_d_mm = profile.z_d_mm;
  budget.z_r_mm = consts.z_r_mm;
  budget.mode = mode;
  budget.scalar_threshold_mm = budget.s_h_mm + budget.s_r_mm + budget.c_mm;
  if (mode == UncertaintyMode::Scalar) {
    budget.scalar_threshold_mm += budget.z_d_mm.norm() + budget.z_r_mm.norm();
  }
  return budget;
}

}  // namespace hrsf
