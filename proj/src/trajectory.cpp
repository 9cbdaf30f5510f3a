#include "hrsf/sim/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace hrsf {

namespace {
constexpr int kArcSamples = 1024;
constexpr double kZeroArcEps = 1e-9;
}  // namespace

void RobotTrajectory::validate(int dof, double full_speed_mm_s) const {
  if (start_q_rad.size() != dof) {
    throw ConfigError("trajectory start has wrong joint count");
  }
  int moves = 0;
  for (const auto& action : actions) {
    if (action.kind == TrajectoryAction::Kind::Move) {
      ++moves;
      if (action.target_q_rad.size() != dof) {
        throw ConfigError("trajectory waypoint has wrong joint count");
      }
      if (!(action.speed_mm_s > 0) || action.speed_mm_s > full_speed_mm_s) {
        throw ConfigError("trajectory nominal speed must be in (0, full_speed]");
      }
      if (!action.target_q_rad.allFinite()) {
        throw ConfigError("trajectory waypoint is not finite");
      }
    } else {
      if (!(action.dwell_s >= 0)) throw ConfigError("dwell duration must be >= 0");
    }
  }
  if (moves < 1) throw ConfigError("trajectory needs at least one move");
}

MotionPlan::MotionPlan(const DhTabled& dh, const RobotTrajectory& trajectory)
    : dh_(&dh), current_q_(trajectory.start_q_rad) {
  VecXd q_prev = trajectory.start_q_rad;
  for (const auto& action : trajectory.actions) {
    Segment seg;
    seg.kind = action.kind;
    if (action.kind == TrajectoryAction::Kind::Dwell) {
      seg.dwell_s = action.dwell_s;
      seg.q_from = seg.q_to = q_prev;
      segments_.push_back(std::move(seg));
      continue;
    }
    seg.q_from = q_prev;
    seg.q_to = action.target_q_rad;
    seg.speed_mm_s = action.speed_mm_s;
    seg.cum_arc_mm.resize(kArcSamples + 1);
    seg.cum_arc_mm[0] = 0;
    Vec3d prev_tcp = tcp_position(dh, seg.q_from);
    for (int i = 1; i <= kArcSamples; ++i) {
      const double s = static_cast<double>(i) / kArcSamples;
      const VecXd q = seg.q_from + s * (seg.q_to - seg.q_from);
      const Vec3d tcp = tcp_position(dh, q);
      seg.cum_arc_mm[static_cast<std::size_t>(i)] =
          seg.cum_arc_mm[static_cast<std::size_t>(i - 1)] + (tcp - prev_tcp).norm();
      prev_tcp = tcp;
    }
    seg.total_arc_mm = seg.cum_arc_mm.back();
    q_prev = seg.q_to;
    segments_.push_back(std::move(seg));
  }
  if (!segments_.empty() && segments_.front().kind == TrajectoryAction::Kind::Dwell) {
    dwell_left_s_ = segments_.front().dwell_s;
  }
}

void MotionPlan::advance(double dt_s, double cmd_limit_mm_s) {
  double time_left = dt_s;
  while (time_left > 1e-15 && !complete()) {
    Segment& seg = segments_[action_index_];
    if (seg.kind == TrajectoryAction::Kind::Dwell) {
      const double used = std::min(dwell_left_s_, time_left);
      dwell_left_s_ -= used;
      time_left -= used;
      if (dwell_left_s_ <= 1e-15) {
        ++action_index_;
        if (!complete() && segments_[action_index_].kind == TrajectoryAction::Kind::Dwell) {
          dwell_left_s_ = segments_[action_index_].dwell_s;
        }
        arc_pos_mm_ = 0;
      }
      continue;
    }

    const double v = std::min(seg.speed_mm_s, cmd_limit_mm_s);
    if (seg.total_arc_mm <= kZeroArcEps) {
      // Degenerate move (coincident waypoints): completes instantly.
      current_q_ = seg.q_to;
      ++action_index_;
      arc_pos_mm_ = 0;
      if (!complete() && segments_[action_index_].kind == TrajectoryAction::Kind::Dwell) {
        dwell_left_s_ = segments_[action_index_].dwell_s;
      }
      continue;
    }
    if (v <= 0) return;  // commanded to a stop; step time elapses in place

    const double dist_avail = seg.total_arc_mm - arc_pos_mm_;
    const double dist_wanted = v * time_left;
    if (dist_wanted < dist_avail) {
      arc_pos_mm_ += dist_wanted;
      time_left = 0;
    } else {
      time_left -= dist_avail / v;
      current_q_ = seg.q_to;
      ++action_index_;
      arc_pos_mm_ = 0;
      if (!complete() && segments_[action_index_].kind == TrajectoryAction::Kind::Dwell) {
        dwell_left_s_ = segments_[action_index_].dwell_s;
      }
      continue;
    }
  }
  update_q();
}

void MotionPlan::update_q() {
  if (complete()) return;
  const Segment& seg = segments_[action_index_];
  if (seg.kind == TrajectoryAction::Kind::Dwell) {
    current_q_ = seg.q_from;
    return;
  }
  if (seg.total_arc_mm <= kZeroArcEps) {
    current_q_ = seg.q_from;
    return;
  }
  const auto it = std::upper_bound(seg.cum_arc_mm.begin(), seg.cum_arc_mm.end(), arc_pos_mm_);
  const auto hi = std::min<std::size_t>(
      static_cast<std::size_t>(std::distance(seg.cum_arc_mm.begin(), it)), kArcSamples);
  const std::size_t lo = hi - 1;
  const double seg_len = seg.cum_arc_mm[hi] - seg.cum_arc_mm[lo];
  const double frac = seg_len > 0 ? (arc_pos_mm_ - seg.cum_arc_mm[lo]) / seg_len : 0.0;
  const double s = (static_cast<double>(lo) + frac) / kArcSamples;
  current_q_ = seg.q_from + s * (seg.q_to - seg.q_from);
}

Vec3d MotionPlan::tcp_mm() const { return tcp_position(*dh_, current_q_); }

double MotionPlan::total_path_mm() const {
  double total = 0;
  for (const auto& seg : segments_) total += seg.total_arc_mm;
  return total;
}

double MotionPlan::nominal_duration_s() const {
  double total = 0;
  for (const auto& seg : segments_) {
    if (seg.kind == TrajectoryAction::Kind::Dwell) {
      total += seg.dwell_s;
    } else if (seg.total_arc_mm > kZeroArcEps) {
      total += seg.total_arc_mm / seg.speed_mm_s;
    }
  }
  return total;
}

}  // namespace hrsf
