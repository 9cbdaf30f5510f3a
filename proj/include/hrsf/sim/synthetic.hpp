#pragma once

#include <map>
#include <optional>
#include <random>

#include "hrsf/perception/camera.hpp"
#include "hrsf/perception/depth_image.hpp"
#include "hrsf/perception/observation.hpp"
#include "hrsf/safety/budget.hpp"

namespace hrsf {

/// Body part rendered as a capsule centered on the scripted part point.
struct CapsuleSpec {
  Vec3d axis_dir = Vec3d::UnitZ();  // world frame, normalized on use
  double half_len_mm = 0;           // 0: sphere
  double radius_mm = 50;
};

/// Rough adult proportions; centers are the scripted part points.
std::map<BodyPart, CapsuleSpec> default_capsules();

/// Vanishingly thin markers, for closed-loop tests that must recover the
/// scripted points themselves.
std::map<BodyPart, CapsuleSpec> marker_capsules(double radius_mm = 5.0);

struct SyntheticObservation {
  DepthImage frame;
  std::optional<Observation> observation;  // empty on an injected failure
};

struct SyntheticOptions {
  std::map<BodyPart, CapsuleSpec> capsules = default_capsules();
  Vec3d sigma_mm = Vec3d::Zero();  // per-axis world-frame prediction error
  double failure_rate = 0;         // chance the whole observation is lost
  bool part_masks = true;          // class B: masks (else keypoints)
};

/// Renders the scripted body parts into a depth frame and emits detection
/// geometry matched to the profile class. Stands in for the trained
/// perception models; deterministic for a given RNG state.
SyntheticObservation render_synthetic_observation(
    const std::map<BodyPart, Vec3d>& parts_mm, const PinholeIntrinsicsd& intr,
    const CameraExtrinsicsd& extr, ExtractionClass cls, double timestamp_s,
    const SyntheticOptions& opts, std::mt19937_64& rng);

/// Depth raster of the capsules alone (used by tests and by the
/// observation generator).
DepthImage render_capsule_depth(const std::map<BodyPart, Vec3d>& parts_mm,
                                const std::map<BodyPart, CapsuleSpec>& capsules,
                                const PinholeIntrinsicsd& intr,
                                const CameraExtrinsicsd& extr, double timestamp_s,
                                std::map<BodyPart, PixelMask>* silhouettes = nullptr);

/// Analytic helpers mirrored by the renderer, for oracle checks.
Vec3d capsule_point_nearest_world_origin(const Vec3d& center_mm, const CapsuleSpec& spec);
double capsule_min_camera_depth(const Vec3d& center_mm, const CapsuleSpec& spec,
                                const CameraExtrinsicsd& extr);

}  // namespace hrsf
