#pragma once

#include <cstdint>
#include <string>

#include "hrsf/geometry/dh.hpp"
#include "hrsf/perception/camera.hpp"
#include "hrsf/perception/extract.hpp"
#include "hrsf/regulator/regulator.hpp"
#include "hrsf/safety/budget.hpp"
#include "hrsf/sim/human_script.hpp"
#include "hrsf/sim/latency.hpp"
#include "hrsf/sim/trajectory.hpp"

namespace hrsf {

/// Where the regulator's body points come from during simulation:
/// directly from the scripted ground truth (plus injected noise/failures),
/// or from depth frames rendered per exposure and run through the full
/// extraction pipeline.
enum class ObservationSource { Script, Rendered };

struct NoiseConfig {
  Vec3d sigma_mm = Vec3d::Zero();
  double failure_rate = 0;

  void validate() const {
    if ((sigma_mm.array() < 0).any()) throw ConfigError("noise sigma must be >= 0");
    if (failure_rate < 0 || failure_rate > 1) {
      throw ConfigError("failure rate must be in [0, 1]");
    }
  }
};

/// 2D protective field of the laser-scanner baseline: a floor rectangle
/// expanded on every side by the protected SSM margin plus the intrusion
/// distance C derived from the detection capacity.
struct LaserScannerConfig {
  double x_min_mm = 0, x_max_mm = 0, y_min_mm = 0, y_max_mm = 0;
  double margin_mm = 0;
  double detection_capacity_mm = 70;
  double scan_period_ms = 30;
  double response_ms = 60;

  void validate() const {
    if (x_min_mm > x_max_mm || y_min_mm > y_max_mm) {
      throw ConfigError("laser field rectangle is inverted");
    }
    if (margin_mm < 0 || detection_capacity_mm < 0 || scan_period_ms <= 0 ||
        response_ms < 0) {
      throw ConfigError("laser parameters out of range");
    }
  }
};

struct SimTiming {
  double dt_ms = 1.0;
  double timeout_s = 900.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(dt_ms > 0)) throw ConfigError("sim dt must be positive");
    if (!(timeout_s > 0)) throw ConfigError("sim timeout must be positive");
  }
};

struct HysteresisConfig {
  double margin_mm = 0;
  int clear_frames_required = 1;
  int failure_frames_required = 1;
};

struct ScenarioConfig {
  int schema_version = 1;

  DhTabled dh;
  Vec3d hull_padding_mm = Vec3d::Zero();

  PinholeIntrinsicsd intrinsics;
  CameraExtrinsicsd extrinsics;

  MethodProfile profile = builtin_profile(Method::BodyPartSegmentation);
  SafetyConstants constants;
  HumanSpeedPolicy policy;
  UncertaintyMode mode = UncertaintyMode::PerAxis;
  VelocityLimitTable limits = VelocityLimitTable::quasi_static_defaults();
  HysteresisConfig hysteresis;

  ExtractionOptions extraction;
  ObservationSource source = ObservationSource::Script;
  PipelineLatencyModel latency = PipelineLatencyModel::builtin(Method::BodyPartSegmentation);

  RobotTrajectory trajectory;
  HumanMotionScript human;
  NoiseConfig noise;
  LaserScannerConfig laser;
  SimTiming sim;

  /// Swap in another perception method with its builtin latency split.
  ScenarioConfig with_method(Method m) const {
    ScenarioConfig out = *this;
    out.profile = builtin_profile(m);
    out.latency = PipelineLatencyModel::builtin(m);
    return out;
  }

  void validate() const;
};

/// JSON (de)serialization. load throws ConfigError with the offending
/// field's path in the message.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& json_text);
std::string scenario_to_json(const ScenarioConfig& config);

/// Recomputes the S_h table from the profile latencies and the speed
/// policy and cross-checks every typed section; throws ConfigError on the
/// first mismatch.
void validate_scenario_deep(const ScenarioConfig& config);

}  // namespace hrsf
