#pragma once

#include <vector>

#include "hrsf/geometry/dh.hpp"

namespace hrsf {

/// One trajectory element: a joint-space move at a nominal Cartesian TCP
/// speed, or a stationary dwell (e.g. a screwing action).
struct TrajectoryAction {
  enum class Kind { Move, Dwell };
  Kind kind = Kind::Move;
  VecXd target_q_rad;          // Move
  double speed_mm_s = 0;       // Move: nominal TCP speed
  double dwell_s = 0;          // Dwell
};

struct RobotTrajectory {
  VecXd start_q_rad;
  std::vector<TrajectoryAction> actions;

  void validate(int dof, double full_speed_mm_s) const;
};

/// Executable form of a trajectory: joint-space lerp segments with
/// precomputed TCP arc-length tables so the path parameter can be advanced
/// at an exact Cartesian speed.
class MotionPlan {
 public:
  MotionPlan(const DhTabled& dh, const RobotTrajectory& trajectory);

  /// Advance by dt seconds with the TCP speed capped at cmd_limit_mm_s.
  /// Carries leftover time across segment boundaries within the step.
  void advance(double dt_s, double cmd_limit_mm_s);

  bool complete() const { return action_index_ >= segments_.size(); }
  const VecXd& joint_angles() const { return current_q_; }
  Vec3d tcp_mm() const;

  /// Sum of all segment arc lengths (mm).
  double total_path_mm() const;
  /// Time to completion at the nominal speeds with no interference (s).
  double nominal_duration_s() const;

 private:
  struct Segment {
    TrajectoryAction::Kind kind;
    VecXd q_from, q_to;
    double speed_mm_s = 0;
    double dwell_s = 0;
    std::vector<double> cum_arc_mm;  // arc length at each sample, size samples+1
    double total_arc_mm = 0;
  };

  void update_q();

  const DhTabled* dh_;
  std::vector<Segment> segments_;
  std::size_t action_index_ = 0;
  double arc_pos_mm_ = 0;     // within current Move segment
  double dwell_left_s_ = 0;   // within current Dwell
  VecXd current_q_;
};

}  // namespace hrsf
