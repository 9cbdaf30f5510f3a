#pragma once

#include "hrsf/safety/budget.hpp"

namespace hrsf {

/// Timing model of the perception/actuation pipeline. The perception node
/// runs sequentially when double_processing is on: an event that lands just
/// after an exposure waits for the running pass to finish and is then
/// processed in a second full pass, which is the measured worst case.
struct PipelineLatencyModel {
  double capture_period_ms = 33;
  double t_cap_ms = 33;    // exposure + transfer until the frame is available
  double t_alg_ms = 0;     // one inference pass
  double t_3d_ms = 0;      // one spatial-extraction pass
  double t_plc_ms = 20;    // safety-PLC relay of the velocity command
  double t_adj_ms = 60;    // robot velocity adjustment
  bool double_processing = true;

  double pass_ms() const { return t_alg_ms + t_3d_ms; }

  /// Upper bound on event-to-speed-change time under this model.
  double worst_case_ms() const {
    const double passes = double_processing ? 2.0 * pass_ms() : pass_ms();
    return capture_period_ms + t_cap_ms + passes + t_plc_ms + t_adj_ms;
  }

  void validate() const {
    for (double v : {capture_period_ms, t_cap_ms, t_alg_ms, t_3d_ms, t_plc_ms, t_adj_ms}) {
      if (!(v >= 0)) throw ConfigError("pipeline latencies must be non-negative");
    }
    if (!(capture_period_ms > 0)) throw ConfigError("capture period must be positive");
  }

  /// The pipeline may not react slower than the profile's budgeted latency.
  void validate_against(double t_lat_max_ms) const {
    validate();
    if (worst_case_ms() > t_lat_max_ms + 1e-9) {
      throw ConfigError("pipeline worst case exceeds profile t_lat_max_ms");
    }
  }

  LatencyBreakdown breakdown(double t_lat_max_ms) const {
    LatencyBreakdown b;
    b.t_cap_ms = t_cap_ms;
    b.t_alg1_ms = b.t_alg2_ms = t_alg_ms;
    b.t_3d1_ms = b.t_3d2_ms = t_3d_ms;
    b.t_adj_ms = t_adj_ms;
    b.t_lat_max_ms = t_lat_max_ms;
    return b;
  }

  /// Stage split calibrated so the worst case lands on the method's
  /// measured t_lat_max.
  static PipelineLatencyModel builtin(Method m) {
    PipelineLatencyModel model;
    switch (m) {
      case Method::BodyRecognition:      model.t_alg_ms = 92;  model.t_3d_ms = 20; break;
      case Method::PoseEstimation:       model.t_alg_ms = 64;  model.t_3d_ms = 15; break;
      case Method::BodySegmentation:     model.t_alg_ms = 178; model.t_3d_ms = 28; break;
      case Method::BodyPartSegmentation: model.t_alg_ms = 293; model.t_3d_ms = 40; break;
    }
    return model;
  }
};

}  // namespace hrsf
