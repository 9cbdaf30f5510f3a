#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "hrsf/errors.hpp"
#include "hrsf/geometry/dh.hpp"

namespace hrsf {

/// Pinhole intrinsics of the depth/color-aligned camera.
template <typename Scalar>
struct PinholeIntrinsics {
  Scalar fx_px = 0;
  Scalar fy_px = 0;
  Scalar cx_px = 0;
  Scalar cy_px = 0;
  int width_px = 0;
  int height_px = 0;

  void validate() const {
    if (fx_px <= Scalar(0) || fy_px <= Scalar(0)) {
      throw ConfigError("camera focal lengths must be positive");
    }
    if (width_px <= 0 || height_px <= 0) {
      throw ConfigError("camera resolution must be positive");
    }
    if (cx_px < Scalar(0) || cx_px >= Scalar(width_px) || cy_px < Scalar(0) ||
        cy_px >= Scalar(height_px)) {
      throw ConfigError("camera principal point must lie inside the image");
    }
  }
};

/// Rigid transform mapping camera-frame points to the robot world frame.
template <typename Scalar>
struct CameraExtrinsics {
  Mat3<Scalar> rotation = Mat3<Scalar>::Identity();
  Vec3<Scalar> translation_mm = Vec3<Scalar>::Zero();

  Vec3<Scalar> to_world(const Vec3<Scalar>& p_cam_mm) const {
    return rotation * p_cam_mm + translation_mm;
  }

  Vec3<Scalar> to_camera(const Vec3<Scalar>& p_world_mm) const {
    return rotation.transpose() * (p_world_mm - translation_mm);
  }

  void validate() const {
    const Scalar ortho_err =
        (rotation * rotation.transpose() - Mat3<Scalar>::Identity()).norm();
    if (ortho_err > Scalar(1e-9)) {
      throw ConfigError("camera rotation is not orthonormal");
    }
    if (std::abs(rotation.determinant() - Scalar(1)) > Scalar(1e-9)) {
      throw ConfigError("camera rotation must be proper (det +1)");
    }
    if (!translation_mm.allFinite()) {
      throw ConfigError("camera translation must be finite");
    }
  }
};

using PinholeIntrinsicsd = PinholeIntrinsics<double>;
using CameraExtrinsicsd = CameraExtrinsics<double>;

/// Pixel + metric depth to a camera-frame point.
template <typename Scalar>
Vec3<Scalar> deproject(Scalar u_px, Scalar v_px, Scalar depth_mm,
                       const PinholeIntrinsics<Scalar>& intr) {
  if (depth_mm <= Scalar(0)) throw ConfigError("deproject requires a positive depth");
  return {(u_px - intr.cx_px) * depth_mm / intr.fx_px,
          (v_px - intr.cy_px) * depth_mm / intr.fy_px, depth_mm};
}

/// Camera-frame point back to pixel coordinates.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> project(const Vec3<Scalar>& p_cam_mm,
                                    const PinholeIntrinsics<Scalar>& intr) {
  if (p_cam_mm.z() <= Scalar(0)) throw ConfigError("project requires positive depth");
  return {intr.fx_px * p_cam_mm.x() / p_cam_mm.z() + intr.cx_px,
          intr.fy_px * p_cam_mm.y() / p_cam_mm.z() + intr.cy_px};
}

}  // namespace hrsf
