#include "hrsf/sim/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hrsf {

std::map<BodyPart, CapsuleSpec> default_capsules() {
  const Vec3d up = Vec3d::UnitZ();
  return {
      {BodyPart::Head, {up, 30, 110}},
      {BodyPart::Body, {up, 250, 170}},
      {BodyPart::LeftUpperArm, {up, 120, 50}},
      {BodyPart::RightUpperArm, {up, 120, 50}},
      {BodyPart::LeftLowerArm, {up, 120, 45}},
      {BodyPart::RightLowerArm, {up, 120, 45}},
      {BodyPart::LeftUpperLeg, {up, 180, 75}},
      {BodyPart::RightUpperLeg, {up, 180, 75}},
      {BodyPart::LeftLowerLeg, {up, 180, 60}},
      {BodyPart::RightLowerLeg, {up, 180, 60}},
  };
}

std::map<BodyPart, CapsuleSpec> marker_capsules(double radius_mm) {
  std::map<BodyPart, CapsuleSpec> out;
  for (BodyPart part : kAllBodyParts) {
    out[part] = CapsuleSpec{Vec3d::UnitZ(), 0, radius_mm};
  }
  return out;
}

namespace {

struct CameraCapsule {
  Vec3d a_cam, b_cam;  // segment endpoints, camera frame
  double radius;
};

CameraCapsule to_camera_capsule(const Vec3d& center, const CapsuleSpec& spec,
                                const CameraExtrinsicsd& extr) {
  Vec3d dir = spec.axis_dir;
  const double n = dir.norm();
  dir = n > 0 ? Vec3d(dir / n) : Vec3d::UnitZ();
  const Vec3d a_world = center - spec.half_len_mm * dir;
  const Vec3d b_world = center + spec.half_len_mm * dir;
  return {extr.to_camera(a_world), extr.to_camera(b_world), spec.radius_mm};
}

/// Smallest positive ray parameter t with |t*d - capsule| = radius, where
/// the ray direction d has d.z == 1 so t equals the camera depth.
std::optional<double> ray_capsule_depth(const Vec3d& d, const CameraCapsule& cap) {
  double best = std::numeric_limits<double>::infinity();

  const Vec3d ab = cap.b_cam - cap.a_cam;
  const double ab_len = ab.norm();

  if (ab_len > 1e-12) {
    const Vec3d m = ab / ab_len;
    const Vec3d w = -cap.a_cam;
    const Vec3d d_perp = d - d.dot(m) * m;
    const Vec3d w_perp = w - w.dot(m) * m;
    const double a = d_perp.squaredNorm();
    if (a > 1e-18) {
      const double b = w_perp.dot(d_perp);
      const double c = w_perp.squaredNorm() - cap.radius * cap.radius;
      const double disc = b * b - a * c;
      if (disc >= 0) {
        const double root = std::sqrt(disc);
        for (double t : {(-b - root) / a, (-b + root) / a}) {
          if (t <= 0) continue;
          const double s = (t * d - cap.a_cam).dot(m);
          if (s >= 0 && s <= ab_len) best = std::min(best, t);
        }
      }
    }
  }

  for (const Vec3d& c_pt : {cap.a_cam, cap.b_cam}) {
    const double a = d.squaredNorm();
    const double b = d.dot(-c_pt);
    const double c = c_pt.squaredNorm() - cap.radius * cap.radius;
    const double disc = b * b - a * c;
    if (disc < 0) continue;
    const double root = std::sqrt(disc);
    for (double t : {(-b - root) / a, (-b + root) / a}) {
      if (t > 0) best = std::min(best, t);
    }
  }

  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

struct PixelRect {
  int u0, v0, u1, v1;  // half-open
  bool empty() const { return u0 >= u1 || v0 >= v1; }
};

PixelRect capsule_pixel_bounds(const CameraCapsule& cap, const PinholeIntrinsicsd& intr) {
  const Vec3d center = 0.5 * (cap.a_cam + cap.b_cam);
  const double bound_r = 0.5 * (cap.b_cam - cap.a_cam).norm() + cap.radius;
  const double z_near = center.z() - bound_r;
  if (z_near <= 1.0) return {0, 0, 0, 0};  // behind or grazing the camera

  double u_min = std::numeric_limits<double>::infinity(), u_max = -u_min;
  double v_min = u_min, v_max = -u_min;
  for (double lateral : {-bound_r, bound_r}) {
    for (double dz : {-bound_r, bound_r}) {
      const double z = std::max(center.z() + dz, 1.0);
      u_min = std::min(u_min, intr.cx_px + intr.fx_px * (center.x() + lateral) / z);
      u_max = std::max(u_max, intr.cx_px + intr.fx_px * (center.x() + lateral) / z);
      v_min = std::min(v_min, intr.cy_px + intr.fy_px * (center.y() + lateral) / z);
      v_max = std::max(v_max, intr.cy_px + intr.fy_px * (center.y() + lateral) / z);
    }
  }
  PixelRect rect;
  rect.u0 = std::max(static_cast<int>(std::floor(u_min)) - 1, 0);
  rect.v0 = std::max(static_cast<int>(std::floor(v_min)) - 1, 0);
  rect.u1 = std::min(static_cast<int>(std::ceil(u_max)) + 2, intr.width_px);
  rect.v1 = std::min(static_cast<int>(std::ceil(v_max)) + 2, intr.height_px);
  return rect;
}

}  // namespace

DepthImage render_capsule_depth(const std::map<BodyPart, Vec3d>& parts_mm,
                                const std::map<BodyPart, CapsuleSpec>& capsules,
                                const PinholeIntrinsicsd& intr,
                                const CameraExtrinsicsd& extr, double timestamp_s,
                                std::map<BodyPart, PixelMask>* silhouettes) {
  DepthImage frame(intr.width_px, intr.height_px, timestamp_s);
  std::vector<std::int8_t> winner(frame.depth_mm.size(), -1);
  std::vector<double> zbuf(frame.depth_mm.size(), std::numeric_limits<double>::infinity());

  int part_index = 0;
  for (BodyPart part : kAllBodyParts) {
    const auto center_it = parts_mm.find(part);
    const auto spec_it = capsules.find(part);
    if (center_it == parts_mm.end() || spec_it == capsules.end()) {
      ++part_index;
      continue;
    }
    const CameraCapsule cap = to_camera_capsule(center_it->second, spec_it->second, extr);
    const PixelRect rect = capsule_pixel_bounds(cap, intr);
    for (int v = rect.v0; v < rect.v1; ++v) {
      for (int u = rect.u0; u < rect.u1; ++u) {
        const Vec3d d((u - intr.cx_px) / intr.fx_px, (v - intr.cy_px) / intr.fy_px, 1.0);
        const auto depth = ray_capsule_depth(d, cap);
        if (!depth) continue;
        const std::size_t idx = static_cast<std::size_t>(v) * intr.width_px + u;
        if (*depth < zbuf[idx]) {
          zbuf[idx] = *depth;
          winner[idx] = static_cast<std::int8_t>(part_index);
          const double clamped = std::clamp(*depth, 1.0, 65535.0);
          frame.depth_mm[idx] = static_cast<std::uint16_t>(std::lround(clamped));
        }
      }
    }
    ++part_index;
  }

  if (silhouettes) {
    silhouettes->clear();
    for (int v = 0; v < frame.height_px; ++v) {
      for (int u = 0; u < frame.width_px; ++u) {
        const std::size_t idx = static_cast<std::size_t>(v) * frame.width_px + u;
        if (winner[idx] >= 0) {
          (*silhouettes)[kAllBodyParts[static_cast<std::size_t>(winner[idx])]].push_back({u, v});
        }
      }
    }
  }
  return frame;
}

Vec3d capsule_point_nearest_world_origin(const Vec3d& center_mm, const CapsuleSpec& spec) {
  Vec3d dir = spec.axis_dir;
  const double n = dir.norm();
  dir = n > 0 ? Vec3d(dir / n) : Vec3d::UnitZ();
  const Vec3d a = center_mm - spec.half_len_mm * dir;
  const double s = std::clamp(-a.dot(dir), 0.0, 2.0 * spec.half_len_mm);
  const Vec3d axis_pt = a + s * dir;
  const double len = axis_pt.norm();
  if (len <= spec.radius_mm) return Vec3d::Zero();  // origin inside the capsule
  return axis_pt * (1.0 - spec.radius_mm / len);
}

double capsule_min_camera_depth(const Vec3d& center_mm, const CapsuleSpec& spec,
                                const CameraExtrinsicsd& extr) {
  const CameraCapsule cap = to_camera_capsule(center_mm, spec, extr);
  return std::min(cap.a_cam.z(), cap.b_cam.z()) - cap.radius;
}

SyntheticObservation render_synthetic_observation(
    const std::map<BodyPart, Vec3d>& parts_mm, const PinholeIntrinsicsd& intr,
    const CameraExtrinsicsd& extr, ExtractionClass cls, double timestamp_s,
    const SyntheticOptions& opts, std::mt19937_64& rng) {
  SyntheticObservation out;
  std::map<BodyPart, PixelMask> silhouettes;
  out.frame = render_capsule_depth(parts_mm, opts.capsules, intr, extr, timestamp_s,
                                   &silhouettes);

  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool failed = uniform(rng) < opts.failure_rate;

  // Draw the perturbations unconditionally so the RNG stream does not
  // depend on the failure outcome.
  std::map<BodyPart, Vec3d> perturbed;
  for (BodyPart part : kAllBodyParts) {
    const Vec3d noise(gauss(rng) * opts.sigma_mm.x(), gauss(rng) * opts.sigma_mm.y(),
                      gauss(rng) * opts.sigma_mm.z());
    const auto it = parts_mm.find(part);
    if (it != parts_mm.end()) perturbed[part] = it->second + noise;
  }
  if (failed) return out;

  Observation obs;
  obs.timestamp_s = timestamp_s;

  if (cls == ExtractionClass::A) {
    double u_min = std::numeric_limits<double>::infinity(), u_max = -u_min;
    double v_min = u_min, v_max = -u_min;
    for (const auto& [part, center] : perturbed) {
      const CameraCapsule cap = to_camera_capsule(center, opts.capsules.at(part), extr);
      const PixelRect rect = capsule_pixel_bounds(cap, intr);
      if (rect.empty()) continue;
      u_min = std::min(u_min, static_cast<double>(rect.u0));
      u_max = std::max(u_max, static_cast<double>(rect.u1));
      v_min = std::min(v_min, static_cast<double>(rect.v0));
      v_max = std::max(v_max, static_cast<double>(rect.v1));
    }
    if (!std::isfinite(u_min)) {
      // Nothing projects into the frame: emit an empty mask, which the
      // extraction reports as a failed identification.
      obs.payload = ClassARegion{PixelMask{}};
    } else {
      BoundingBox box;
      box.x_c_px = 0.5 * (u_min + u_max);
      box.y_c_px = 0.5 * (v_min + v_max);
      box.w_px = u_max - u_min;
      box.h_px = v_max - v_min;
      obs.payload = ClassARegion{box};
    }
    out.observation = obs;
    return out;
  }

  if (opts.part_masks) {
    PartMaskMap masks;
    for (const auto& [part, center] : perturbed) {
      const auto sil = silhouettes.find(part);
      if (sil == silhouettes.end()) continue;
      // Shift the true silhouette by the projected prediction offset.
      Eigen::Vector2i shift(0, 0);
      const Vec3d true_cam = extr.to_camera(parts_mm.at(part));
      const Vec3d pred_cam = extr.to_camera(center);
      if (true_cam.z() > 1.0 && pred_cam.z() > 1.0) {
        const auto p0 = project(true_cam, intr);
        const auto p1 = project(pred_cam, intr);
        shift = {static_cast<int>(std::lround(p1.x() - p0.x())),
                 static_cast<int>(std::lround(p1.y() - p0.y()))};
      }
      PixelMask mask;
      mask.reserve(sil->second.size());
      for (const auto& px : sil->second) mask.push_back(px + shift);
      masks[part] = std::move(mask);
    }
    obs.payload = ClassBParts{std::move(masks)};
  } else {
    KeypointMap keypoints;
    for (const auto& [part, center] : perturbed) {
      const Vec3d cam = extr.to_camera(center);
      if (cam.z() <= 1.0) continue;
      const auto px = project(cam, intr);
      if (px.x() < 0 || px.x() >= intr.width_px || px.y() < 0 || px.y() >= intr.height_px) {
        continue;
      }
      keypoints[part] = px;
    }
    obs.payload = ClassBParts{std::move(keypoints)};
  }
  out.observation = obs;
  return out;
}

}  // namespace hrsf
