#pragma once

#include <optional>
#include <utility>

#include "hrsf/perception/camera.hpp"
#include "hrsf/perception/depth_image.hpp"
#include "hrsf/perception/observation.hpp"

namespace hrsf {

/// How a class-B part mask is reduced to a single body point.
enum class MaskSelection {
  NearestWorldOrigin,  // point closest to the robot world origin
  MinCameraDepth,      // point with the smallest camera depth
};

struct ExtractionOptions {
  DepthWindow window;
  int roi_w_px = 10;
  int roi_h_px = 10;
  MaskSelection mask_selection = MaskSelection::NearestWorldOrigin;
};

struct PixelDepth {
  Eigen::Vector2i pixel;
  double depth_mm = 0;
};

/// Minimum valid depth over a class-A region. Ties break in scanline order
/// (lowest row, then lowest column). Empty optional: no pixel passed the
/// validity window, i.e. a failed identification.
std::optional<PixelDepth> min_depth_point(const DepthImage& frame,
                                          const ClassARegion& region,
                                          const DepthWindow& window);

/// Mean of the valid depths inside a roi_w x roi_h window centered on the
/// given pixel, clipped to the frame. Empty optional if no pixel is valid.
std::optional<double> roi_mean_depth(const DepthImage& frame,
                                     const Eigen::Vector2d& center_px,
                                     int roi_w_px, int roi_h_px,
                                     const DepthWindow& window);

/// Full depth-information extraction: detection geometry plus depth frame
/// to world-frame body points. Parts that fail the depth window are listed
/// in failed_parts; an entirely failed observation yields an empty point set.
BodyPointSet extract_body_points(const DepthImage& frame, const Observation& obs,
                                 const PinholeIntrinsicsd& intr,
                                 const CameraExtrinsicsd& extr,
                                 const ExtractionOptions& opts);

}  // namespace hrsf
