#pragma once

#include <cstdint>
#include <vector>

#include "hrsf/errors.hpp"

namespace hrsf {

/// Depth frame in integer millimeters, row-major. 0 marks an invalid pixel.
struct DepthImage {
  int width_px = 0;
  int height_px = 0;
  double timestamp_s = 0;
  std::vector<std::uint16_t> depth_mm;

  DepthImage() = default;
  DepthImage(int width, int height, double timestamp = 0)
      : width_px(width), height_px(height), timestamp_s(timestamp),
        depth_mm(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0) {
    if (width <= 0 || height <= 0) throw ConfigError("depth frame dimensions must be positive");
  }

  bool in_bounds(int u, int v) const {
    return u >= 0 && u < width_px && v >= 0 && v < height_px;
  }

  std::uint16_t at(int u, int v) const {
    return depth_mm[static_cast<std::size_t>(v) * static_cast<std::size_t>(width_px) +
                    static_cast<std::size_t>(u)];
  }

  void set(int u, int v, std::uint16_t d) {
    depth_mm[static_cast<std::size_t>(v) * static_cast<std::size_t>(width_px) +
             static_cast<std::size_t>(u)] = d;
  }
};

/// Depth validity window: values below min_mm are stereo artifacts, values
/// above max_mm are out of sensor range. Both count as failed measurements.
struct DepthWindow {
  double min_mm = 500.0;   // d_thres
  double max_mm = 8000.0;

  bool valid(double depth_mm) const {
    return depth_mm >= min_mm && depth_mm <= max_mm;
  }
};

}  // namespace hrsf
