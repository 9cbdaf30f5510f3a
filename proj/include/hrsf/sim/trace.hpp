#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hrsf/body_parts.hpp"
#include "hrsf/geometry/dh.hpp"
#include "hrsf/sim/human_script.hpp"

namespace hrsf {

/// One simulation timestep as written to the trace CSV.
struct TraceRecord {
  double t_s = 0;
  VecXd q_rad;
  Vec3d tcp_mm = Vec3d::Zero();
  double cmd_v_mm_s = 0;
  double act_v_mm_s = 0;
  double sep_mm = 0;  // +inf when no measurement exists yet
  std::optional<BodyPart> limiting_part;
  Phase phase = Phase::None;
};

/// Cycle statistics of one run (mean/std cover repeated runs when
/// aggregated by a sweep; a single run reports std 0).
struct TraceSummary {
  double t_cycle_s = 0;
  double mean_s = 0;
  double std_s = 0;
  int runs = 1;
  std::map<Phase, double> phase_share;
  std::size_t records = 0;
};

/// Cycle time: from the last instant at the initial pose before the first
/// departure until the arrival of the final return. Throws
/// IncompleteCycleError if the trace never departs or does not end at the
/// initial pose.
double measure_cycle_time(const std::vector<TraceRecord>& trace);

/// CSV emission. Fixed column order
///   t_s,q1_rad..qN_rad,tcp_x_mm,tcp_y_mm,tcp_z_mm,cmd_v_mm_s,act_v_mm_s,
///   sep_mm,limiting_part,phase
/// with '.' decimal point and '\n' line endings.
std::string trace_to_csv(const std::vector<TraceRecord>& trace);
void write_trace_csv(const std::vector<TraceRecord>& trace, const std::string& path);

TraceSummary summarize_trace(const std::vector<TraceRecord>& trace);

}  // namespace hrsf
