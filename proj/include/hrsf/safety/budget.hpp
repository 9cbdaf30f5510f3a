#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hrsf/errors.hpp"
#include "hrsf/geometry/dh.hpp"

namespace hrsf {

/// Stage timings of one reaction chain, worst case. Components follow the
/// measured chain: capture, two inference passes, two spatial-extraction
/// passes, velocity adjustment.
struct LatencyBreakdown {
  double t_cap_ms = 0;
  double t_alg1_ms = 0;
  double t_3d1_ms = 0;
  double t_alg2_ms = 0;
  double t_3d2_ms = 0;
  double t_adj_ms = 0;
  double t_lat_max_ms = 0;

  double component_sum_ms() const {
    return t_cap_ms + t_alg1_ms + t_3d1_ms + t_alg2_ms + t_3d2_ms + t_adj_ms;
  }

  void validate() const {
    for (double v : {t_cap_ms, t_alg1_ms, t_3d1_ms, t_alg2_ms, t_3d2_ms, t_adj_ms,
                     t_lat_max_ms}) {
      if (!(v >= 0)) throw ConfigError("latency components must be non-negative");
    }
    if (t_lat_max_ms + 1e-9 < component_sum_ms()) {
      throw ConfigError("t_lat_max_ms is below the sum of its components");
    }
  }
};

/// ISO/TS 15066 human-speed assumption: 1.6 m/s when the separation
/// distance is above 0.5 m, 2.0 m/s below.
struct HumanSpeedPolicy {
  double v_far_mm_s = 1600.0;
  double v_near_mm_s = 2000.0;
  double near_threshold_mm = 500.0;

  /// No measurement yet defaults to the conservative near-field speed.
  double human_speed(std::optional<double> current_distance_mm) const {
    if (!current_distance_mm) return v_near_mm_s;
    return *current_distance_mm < near_threshold_mm ? v_near_mm_s : v_far_mm_s;
  }

  void validate() const {
    if (!(v_far_mm_s > 0) || v_near_mm_s < v_far_mm_s) {
      throw ConfigError("speed policy requires v_near >= v_far > 0");
    }
    if (!(near_threshold_mm >= 0)) throw ConfigError("near threshold must be >= 0");
  }
};

enum class ExtractionClass { A, B };

enum class Method {
  BodyRecognition,
  PoseEstimation,
  BodySegmentation,
  BodyPartSegmentation,
};

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

/// Whole-body methods localize a single point (class A); per-part methods
/// attribute points to body parts (class B).
ExtractionClass method_class(Method m);

/// Safety budget inputs of one perception method: worst-case latency and
/// the per-axis position prediction error.
struct MethodProfile {
  Method method = Method::BodyPartSegmentation;
  double t_lat_max_ms = 0;
  Vec3d z_d_mm = Vec3d::Zero();

  ExtractionClass extraction_class() const { return method_class(method); }

  void validate() const {
    if (!(t_lat_max_ms >= 0)) throw ConfigError("profile t_lat_max_ms must be >= 0");
    if ((z_d_mm.array() < 0).any()) throw ConfigError("profile z_d_mm must be non-negative");
  }
};

/// The four measured profiles shipped with the framework.
std::vector<MethodProfile> builtin_profiles();
MethodProfile builtin_profile(Method m);

/// System-level contributions that do not depend on the perception method.
/// s_s_mm stays 0: the framework avoids robot stops entirely.
struct SafetyConstants {
  double s_r_mm = 5.0;            // robot joint-query latency, as distance
  double s_s_mm = 0.0;            // stopping distance, neglected
  Vec3d z_r_mm = Vec3d(8, 7, 11); // robot positioning uncertainty per axis
  double detection_capacity_mm = 0;  // sensor detection capacity d, for C

  void validate() const {
    if (!(s_r_mm >= 0) || !(s_s_mm >= 0) || !(detection_capacity_mm >= 0) ||
        (z_r_mm.array() < 0).any()) {
      throw ConfigError("safety constants must be non-negative");
    }
    if (s_s_mm != 0) throw ConfigError("stopping contribution s_s_mm is fixed at 0");
  }
};

/// How the per-axis uncertainty terms enter the separation budget.
enum class UncertaintyMode {
  PerAxis,  // Z_d + Z_r expand the protective hull per axis (default)
  Scalar,   // their Euclidean norms are added to the scalar threshold
};

/// Assembled minimum separation distance, split by contribution.
struct SeparationBudget {
  double s_h_mm = 0;
  double s_r_mm = 0;
  double c_mm = 0;
  Vec3d z_d_mm = Vec3d::Zero();
  Vec3d z_r_mm = Vec3d::Zero();
  UncertaintyMode mode = UncertaintyMode::PerAxis;
  double scalar_threshold_mm = 0;
};

/// Human-motion contribution S_h = v_h * t_lat_max. Full precision; use
/// round_to_mm for reporting.
double compute_Sh(double t_lat_max_ms, const HumanSpeedPolicy& policy,
                  std::optional<double> current_distance_mm);

/// Intrusion distance C = 8 (d - 14) for a 2D protective-field sensor.
/// Detection capacities at or below 14 mm contribute nothing.
double compute_C(double detection_capacity_mm);

/// Robot latency contribution for other robots: distance covered at full
/// speed during one joint-state query.
double s_r_from_query_latency(double t_query_ms, double v_robot_max_mm_s);

SeparationBudget compute_budget(const MethodProfile& profile,
                                const SafetyConstants& consts,
                                const HumanSpeedPolicy& policy,
                                std::optional<double> current_distance_mm,
                                UncertaintyMode mode);

inline long round_to_mm(double value_mm) {
  return std::lround(value_mm);
}

}  // namespace hrsf
