#include "hrsf/sim/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "hrsf/errors.hpp"

namespace hrsf {

namespace {

constexpr double kHomeEpsRad = 1e-9;

bool at_pose(const VecXd& q, const VecXd& home) {
  return (q - home).cwiseAbs().maxCoeff() <= kHomeEpsRad;
}

void append_number(std::string& out, const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, value);
  out += buf;
}

}  // namespace

double measure_cycle_time(const std::vector<TraceRecord>& trace) {
  if (trace.size() < 2) throw IncompleteCycleError("trace too short for a cycle");
  const VecXd& home = trace.front().q_rad;

  std::size_t first_moved = trace.size();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (!at_pose(trace[i].q_rad, home)) {
      first_moved = i;
      break;
    }
  }
  if (first_moved == trace.size()) {
    throw IncompleteCycleError("robot never left its initial position");
  }
  if (!at_pose(trace.back().q_rad, home)) {
    throw IncompleteCycleError("robot did not return to its initial position");
  }

  // Arrival of the final return: start of the home block that extends to
  // the end of the trace.
  std::size_t return_idx = trace.size() - 1;
  while (return_idx > first_moved && at_pose(trace[return_idx - 1].q_rad, home)) {
    --return_idx;
  }
  const double departure_t = trace[first_moved - 1].t_s;
  return trace[return_idx].t_s - departure_t;
}

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
  std::string out;
  const int dof = trace.empty() ? 0 : static_cast<int>(trace.front().q_rad.size());
  out += "t_s";
  for (int j = 1; j <= dof; ++j) out += ",q" + std::to_string(j) + "_rad";
  out += ",tcp_x_mm,tcp_y_mm,tcp_z_mm,cmd_v_mm_s,act_v_mm_s,sep_mm,limiting_part,phase\n";

  for (const auto& rec : trace) {
    append_number(out, "%.3f", rec.t_s);
    for (int j = 0; j < dof; ++j) {
      out += ',';
      append_number(out, "%.9f", rec.q_rad[j]);
    }
    out += ',';
    append_number(out, "%.3f", rec.tcp_mm.x());
    out += ',';
    append_number(out, "%.3f", rec.tcp_mm.y());
    out += ',';
    append_number(out, "%.3f", rec.tcp_mm.z());
    out += ',';
    append_number(out, "%.3f", rec.cmd_v_mm_s);
    out += ',';
    append_number(out, "%.3f", rec.act_v_mm_s);
    out += ',';
    if (std::isinf(rec.sep_mm)) {
      out += "inf";
    } else {
      append_number(out, "%.3f", rec.sep_mm);
    }
    out += ',';
    out += rec.limiting_part ? to_token(*rec.limiting_part) : "none";
    out += ',';
    out += to_token(rec.phase);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::vector<TraceRecord>& trace, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open trace output file: " + path);
  const std::string csv = trace_to_csv(trace);
  file.write(csv.data(), static_cast<std::streamsize>(csv.size()));
}

TraceSummary summarize_trace(const std::vector<TraceRecord>& trace) {
  TraceSummary summary;
  summary.records = trace.size();
  summary.t_cycle_s = measure_cycle_time(trace);
  summary.mean_s = summary.t_cycle_s;
  summary.std_s = 0;
  summary.runs = 1;

  if (trace.size() > 1) {
    std::map<Phase, double> time_in_phase;
    double total = 0;
    for (std::size_t i = 1; i < trace.size(); ++i) {
      const double dt = trace[i].t_s - trace[i - 1].t_s;
      time_in_phase[trace[i].phase] += dt;
      total += dt;
    }
    if (total > 0) {
      for (const auto& [phase, t] : time_in_phase) {
        summary.phase_share[phase] = t / total;
      }
    }
  }
  return summary;
}

}  // namespace hrsf
