#include "hrsf/perception/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hrsf {

namespace {

// Scans rows top to bottom, columns left to right, so the first strictly
// smaller depth wins and ties keep the earlier pixel.
std::optional<PixelDepth> min_depth_in_rect(const DepthImage& frame, int u0, int v0,
                                            int u1, int v1, const DepthWindow& window) {
  u0 = std::max(u0, 0);
  v0 = std::max(v0, 0);
  u1 = std::min(u1, frame.width_px);
  v1 = std::min(v1, frame.height_px);
  std::optional<PixelDepth> best;
  for (int v = v0; v < v1; ++v) {
    for (int u = u0; u < u1; ++u) {
      const double d = frame.at(u, v);
      if (!window.valid(d)) continue;
      if (!best || d < best->depth_mm) best = PixelDepth{{u, v}, d};
    }
  }
  return best;
}

std::optional<PixelDepth> min_depth_in_mask(const DepthImage& frame, const PixelMask& mask,
                                            const DepthWindow& window) {
  std::optional<PixelDepth> best;
  for (const auto& px : mask) {
    if (!frame.in_bounds(px.x(), px.y())) continue;
    const double d = frame.at(px.x(), px.y());
    if (!window.valid(d)) continue;
    const bool better =
        !best || d < best->depth_mm ||
        (d == best->depth_mm && (px.y() < best->pixel.y() ||
                                 (px.y() == best->pixel.y() && px.x() < best->pixel.x())));
    if (better) best = PixelDepth{px, d};
  }
  return best;
}

struct RectBounds {
  int u0, v0, u1, v1;  // half-open
};

RectBounds box_to_rect(const BoundingBox& box) {
  // Center/extent to half-open pixel bounds, rounding outward so the stated
  // box is fully covered.
  const int u0 = static_cast<int>(std::floor(box.x_c_px - box.w_px / 2.0));
  const int v0 = static_cast<int>(std::floor(box.y_c_px - box.h_px / 2.0));
  const int u1 = static_cast<int>(std::ceil(box.x_c_px + box.w_px / 2.0));
  const int v1 = static_cast<int>(std::ceil(box.y_c_px + box.h_px / 2.0));
  return {u0, v0, u1, v1};
}

}  // namespace

std::optional<PixelDepth> min_depth_point(const DepthImage& frame,
                                          const ClassARegion& region,
                                          const DepthWindow& window) {
  if (const auto* box = std::get_if<BoundingBox>(&region.region)) {
    const RectBounds r = box_to_rect(*box);
    return min_depth_in_rect(frame, r.u0, r.v0, r.u1, r.v1, window);
  }
  return min_depth_in_mask(frame, std::get<PixelMask>(region.region), window);
}

std::optional<double> roi_mean_depth(const DepthImage& frame,
                                     const Eigen::Vector2d& center_px,
                                     int roi_w_px, int roi_h_px,
                                     const DepthWindow& window) {
  const int cu = static_cast<int>(std::lround(center_px.x()));
  const int cv = static_cast<int>(std::lround(center_px.y()));
  const int u0 = std::max(cu - roi_w_px / 2, 0);
  const int v0 = std::max(cv - roi_h_px / 2, 0);
  const int u1 = std::min(cu - roi_w_px / 2 + roi_w_px, frame.width_px);
  const int v1 = std::min(cv - roi_h_px / 2 + roi_h_px, frame.height_px);

  double sum = 0;
  long count = 0;
  for (int v = v0; v < v1; ++v) {
    for (int u = u0; u < u1; ++u) {
      const double d = frame.at(u, v);
      if (!window.valid(d)) continue;
      sum += d;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

namespace {

std::optional<Vec3d> mask_to_world_point(const DepthImage& frame, const PixelMask& mask,
                                         const PinholeIntrinsicsd& intr,
                                         const CameraExtrinsicsd& extr,
                                         const ExtractionOptions& opts) {
  std::optional<Vec3d> best;
  double best_key = std::numeric_limits<double>::infinity();
  for (const auto& px : mask) {
    if (!frame.in_bounds(px.x(), px.y())) continue;
    const double d = frame.at(px.x(), px.y());
    if (!opts.window.valid(d)) continue;
    const Vec3d cam = deproject<double>(px.x(), px.y(), d, intr);
    const Vec3d world = extr.to_world(cam);
    const double key = opts.mask_selection == MaskSelection::NearestWorldOrigin
                           ? world.squaredNorm()
                           : d;
    if (key < best_key) {
      best_key = key;
      best = world;
    }
  }
  return best;
}

}  // namespace

BodyPointSet extract_body_points(const DepthImage& frame, const Observation& obs,
                                 const PinholeIntrinsicsd& intr,
                                 const CameraExtrinsicsd& extr,
                                 const ExtractionOptions& opts) {
  BodyPointSet out;
  out.timestamp_s = obs.timestamp_s;

  if (const auto* class_a = std::get_if<ClassARegion>(&obs.payload)) {
    out.class_b = false;
    if (const auto hit = min_depth_point(frame, *class_a, opts.window)) {
      const Vec3d cam = deproject<double>(hit->pixel.x(), hit->pixel.y(), hit->depth_mm, intr);
      out.points.push_back({std::nullopt, extr.to_world(cam)});
    }
    return out;
  }

  const auto& class_b = std::get<ClassBParts>(obs.payload);
  out.class_b = true;

  if (const auto* keypoints = std::get_if<KeypointMap>(&class_b.parts)) {
    for (const auto& [part, pixel] : *keypoints) {
      const auto mean = roi_mean_depth(frame, pixel, opts.roi_w_px, opts.roi_h_px, opts.window);
      if (!mean) {
        out.failed_parts.push_back(part);
        continue;
      }
      const Vec3d cam = deproject<double>(pixel.x(), pixel.y(), *mean, intr);
      out.points.push_back({part, extr.to_world(cam)});
    }
    return out;
  }

  for (const auto& [part, mask] : std::get<PartMaskMap>(class_b.parts)) {
    if (const auto world = mask_to_world_point(frame, mask, intr, extr, opts)) {
      out.points.push_back({part, *world});
    } else {
      out.failed_parts.push_back(part);
    }
  }
  return out;
}

}  // namespace hrsf
