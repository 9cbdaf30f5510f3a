#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "hrsf/body_parts.hpp"
#include "hrsf/geometry/dh.hpp"

namespace hrsf {

enum class Phase { None, Coexistence, Collaboration, Cooperation };

std::string_view to_token(Phase phase);
Phase phase_from_token(std::string_view token);

/// Scripted ground-truth human motion: piecewise-linear keyframes of all
/// ten body-part positions, annotated with the interaction phase.
struct HumanKeyframe {
  double t_s = 0;
  std::map<BodyPart, Vec3d> parts_mm;
  Phase phase = Phase::None;
};

struct HumanMotionScript {
  std::vector<HumanKeyframe> keyframes;

  bool empty() const { return keyframes.empty(); }

  /// The human is in the scene from the first keyframe onward; after the
  /// last keyframe it stays at the final scripted position.
  bool present_at(double t_s) const {
    return !keyframes.empty() && t_s >= keyframes.front().t_s;
  }

  std::map<BodyPart, Vec3d> sample(double t_s) const;
  Phase phase_at(double t_s) const;

  void validate() const;
};

}  // namespace hrsf
