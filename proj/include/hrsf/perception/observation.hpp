#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "hrsf/body_parts.hpp"
#include "hrsf/geometry/dh.hpp"

namespace hrsf {

/// Detector bounding box in the paper's center/extent convention (pixels).
struct BoundingBox {
  double x_c_px = 0;
  double y_c_px = 0;
  double w_px = 0;
  double h_px = 0;
};

using PixelMask = std::vector<Eigen::Vector2i>;

/// Whole-body detection: a bounding box or a silhouette mask.
struct ClassARegion {
  std::variant<BoundingBox, PixelMask> region;
};

using KeypointMap = std::map<BodyPart, Eigen::Vector2d>;
using PartMaskMap = std::map<BodyPart, PixelMask>;

/// Per-part detection: either one keypoint pixel per part (pose estimation)
/// or one pixel mask per part (part segmentation).
struct ClassBParts {
  std::variant<KeypointMap, PartMaskMap> parts;
};

struct Observation {
  double timestamp_s = 0;
  std::variant<ClassARegion, ClassBParts> payload;

  bool is_class_a() const { return std::holds_alternative<ClassARegion>(payload); }
};

/// One localized body point in the world frame. part is empty for
/// whole-body (class A) points.
struct BodyPoint {
  std::optional<BodyPart> part;
  Vec3d position_mm = Vec3d::Zero();
};

/// Output of depth extraction: world-frame body points plus the parts whose
/// depth lookup failed the validity window.
struct BodyPointSet {
  double timestamp_s = 0;
  bool human_present = true;  // false: the scene reported no human at all
  bool class_b = false;
  std::vector<BodyPoint> points;
  std::vector<BodyPart> failed_parts;

  /// A human was reported but no body point could be localized.
  bool failed_identification() const { return human_present && points.empty(); }

  static BodyPointSet no_human(double timestamp) {
    BodyPointSet set;
    set.timestamp_s = timestamp;
    set.human_present = false;
    return set;
  }
};

}  // namespace hrsf
