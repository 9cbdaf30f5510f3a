#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "hrsf/errors.hpp"

namespace hrsf {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Mat4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;
using Mat4d = Mat4<double>;
using VecXd = VecX<double>;

/// One row of a Denavit-Hartenberg table (classic convention).
template <typename Scalar>
struct DhRow {
  Scalar a_mm = 0;          // link length
  Scalar alpha_rad = 0;     // link twist
  Scalar d_mm = 0;          // link offset
  Scalar theta0_rad = 0;    // joint angle offset added to the commanded q
};

/// Kinematic description of a serial manipulator: N joints plus an
/// optional translational tool offset from the last frame to the TCP.
template <typename Scalar>
struct DhTable {
  std::vector<DhRow<Scalar>> joints;
  Vec3<Scalar> tool_offset_mm = Vec3<Scalar>::Zero();

  int dof() const { return static_cast<int>(joints.size()); }

  bool has_tool_offset() const {
    return tool_offset_mm.squaredNorm() > Scalar(0);
  }

  void validate() const {
    if (joints.empty()) throw ConfigError("dh table must have at least one joint");
    for (const auto& row : joints) {
      if (!std::isfinite(row.a_mm) || !std::isfinite(row.alpha_rad) ||
          !std::isfinite(row.d_mm) || !std::isfinite(row.theta0_rad)) {
        throw ConfigError("dh table contains a non-finite entry");
      }
    }
    if (!tool_offset_mm.allFinite()) throw ConfigError("tool offset must be finite");
  }
};

/// Joint-space state. Velocities and accelerations are carried through for
/// trace consumers; the kinematics only need the angles.
template <typename Scalar>
struct JointState {
  VecX<Scalar> q_rad;
  std::optional<VecX<Scalar>> qd_rad_s;
  std::optional<VecX<Scalar>> qdd_rad_s2;
};

using DhRowd = DhRow<double>;
using DhTabled = DhTable<double>;
using JointStated = JointState<double>;

/// Homogeneous transform of one DH joint:
///   T = RotZ(theta0 + q) * TransZ(d) * TransX(a) * RotX(alpha)
template <typename Scalar>
Mat4<Scalar> dh_transform(const DhRow<Scalar>& row, Scalar q_rad) {
  const Scalar theta = row.theta0_rad + q_rad;
  const Scalar ct = std::cos(theta), st = std::sin(theta);
  const Scalar ca = std::cos(row.alpha_rad), sa = std::sin(row.alpha_rad);
  Mat4<Scalar> t;
  t << ct, -st * ca,  st * sa, row.a_mm * ct,
       st,  ct * ca, -ct * sa, row.a_mm * st,
        0,       sa,       ca, row.d_mm,
        0,        0,        0, 1;
  return t;
}

/// Positions of the base, every joint frame origin and (if a tool offset is
/// configured) the TCP, all in the world frame. Base is the world origin.
template <typename Scalar>
std::vector<Vec3<Scalar>> forward_kinematics(const DhTable<Scalar>& dh,
                                             const VecX<Scalar>& q_rad) {
  if (q_rad.size() != dh.dof()) {
    throw ConfigError("joint configuration has " + std::to_string(q_rad.size()) +
                      " angles but dh table has " + std::to_string(dh.dof()) +
                      " joints");
  }
  if (!q_rad.allFinite()) throw ConfigError("joint configuration is not finite");

  std::vector<Vec3<Scalar>> positions;
  positions.reserve(static_cast<std::size_t>(dh.dof()) + 2);
  positions.push_back(Vec3<Scalar>::Zero());

  Mat4<Scalar> t = Mat4<Scalar>::Identity();
  for (int i = 0; i < dh.dof(); ++i) {
    t = t * dh_transform(dh.joints[static_cast<std::size_t>(i)], q_rad[i]);
    positions.push_back(t.template block<3, 1>(0, 3));
  }
  if (dh.has_tool_offset()) {
    const Vec3<Scalar> tcp =
        t.template block<3, 3>(0, 0) * dh.tool_offset_mm + t.template block<3, 1>(0, 3);
    positions.push_back(tcp);
  }
  return positions;
}

/// TCP position only (last entry of forward_kinematics).
template <typename Scalar>
Vec3<Scalar> tcp_position(const DhTable<Scalar>& dh, const VecX<Scalar>& q_rad) {
  return forward_kinematics(dh, q_rad).back();
}

}  // namespace hrsf
