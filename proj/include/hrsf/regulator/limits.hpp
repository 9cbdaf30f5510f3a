#pragma once

#include <map>

#include "hrsf/body_parts.hpp"
#include "hrsf/errors.hpp"

namespace hrsf {

/// Body-part-specific maximum Cartesian robot velocities (quasi-static
/// biomechanical limits) plus the unrestricted full speed.
struct VelocityLimitTable {
  std::map<BodyPart, double> limits_mm_s;
  double full_speed_mm_s = 1600.0;

  double limit_for(BodyPart part) const {
    const auto it = limits_mm_s.find(part);
    if (it == limits_mm_s.end()) {
      throw ConfigError("velocity limit table has no entry for " +
                        std::string(to_token(part)));
    }
    return it->second;
  }

  double global_min() const {
    double best = full_speed_mm_s;
    for (BodyPart part : kAllBodyParts) best = std::min(best, limit_for(part));
    return best;
  }

  void validate() const {
    for (BodyPart part : kAllBodyParts) {
      const double limit = limit_for(part);
      if (!(limit > 0) || limit > full_speed_mm_s) {
        throw ConfigError("velocity limit for " + std::string(to_token(part)) +
                          " must be in (0, full_speed]");
      }
    }
    if (!(full_speed_mm_s > 0)) throw ConfigError("full speed must be positive");
  }

  /// Velocities determined for the screwing application: skull 50,
  /// hands/fingers/lower arms 100, chest 100, upper arms 100, thighs 200,
  /// lower legs 50 mm/s.
  static VelocityLimitTable quasi_static_defaults() {
    VelocityLimitTable table;
    table.limits_mm_s = {
        {BodyPart::Head, 50},          {BodyPart::Body, 100},
        {BodyPart::LeftUpperArm, 100}, {BodyPart::RightUpperArm, 100},
        {BodyPart::LeftLowerArm, 100}, {BodyPart::RightLowerArm, 100},
        {BodyPart::LeftUpperLeg, 200}, {BodyPart::RightUpperLeg, 200},
        {BodyPart::LeftLowerLeg, 50},  {BodyPart::RightLowerLeg, 50},
    };
    return table;
  }
};

inline double map_label_to_limit(BodyPart part, const VelocityLimitTable& limits) {
  return limits.limit_for(part);
}

}  // namespace hrsf
