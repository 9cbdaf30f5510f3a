#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "hrsf/errors.hpp"
#include "hrsf/geometry/dh.hpp"

namespace hrsf {

/// Axis-aligned cuboid protective hull around the robot, world frame, mm.
template <typename Scalar>
struct Aabb {
  Vec3<Scalar> min_mm = Vec3<Scalar>::Zero();
  Vec3<Scalar> max_mm = Vec3<Scalar>::Zero();
  Vec3<Scalar> padding_mm = Vec3<Scalar>::Zero();  // already applied to min/max

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& p) const {
    const Vec3<Scalar> pt = p;
    return (pt.array() >= min_mm.array()).all() &&
           (pt.array() <= max_mm.array()).all();
  }

  Vec3<Scalar> extent() const { return max_mm - min_mm; }
};

using Aabbd = Aabb<double>;

/// Per-axis min/max over the link positions, expanded by a non-negative
/// per-axis padding.
template <typename Scalar, typename Derived>
Aabb<Scalar> compute_protective_hull(std::span<const Vec3<Scalar>> links,
                                     const Eigen::MatrixBase<Derived>& padding) {
  if (links.empty()) throw ConfigError("protective hull needs at least one link position");
  const Vec3<Scalar> padding_mm = padding;
  if ((padding_mm.array() < Scalar(0)).any()) {
    throw ConfigError("hull padding must be non-negative");
  }
  Aabb<Scalar> hull;
  hull.min_mm = links.front();
  hull.max_mm = links.front();
  for (const auto& p : links) {
    hull.min_mm = hull.min_mm.cwiseMin(p);
    hull.max_mm = hull.max_mm.cwiseMax(p);
  }
  hull.min_mm -= padding_mm;
  hull.max_mm += padding_mm;
  hull.padding_mm = padding_mm;
  return hull;
}

template <typename Scalar>
Aabb<Scalar> compute_protective_hull(std::span<const Vec3<Scalar>> links) {
  return compute_protective_hull(links, Vec3<Scalar>::Zero().eval());
}

template <typename Scalar, typename Derived>
Aabb<Scalar> compute_protective_hull(const std::vector<Vec3<Scalar>>& links,
                                     const Eigen::MatrixBase<Derived>& padding) {
  return compute_protective_hull(std::span<const Vec3<Scalar>>(links), padding);
}

template <typename Scalar>
Aabb<Scalar> compute_protective_hull(const std::vector<Vec3<Scalar>>& links) {
  return compute_protective_hull(std::span<const Vec3<Scalar>>(links));
}

/// Euclidean distance from a point to the closed box; 0 inside or on the
/// boundary.
template <typename Scalar, typename Derived>
Scalar point_hull_distance(const Eigen::MatrixBase<Derived>& p, const Aabb<Scalar>& hull) {
  const Vec3<Scalar> pt = p;
  const Vec3<Scalar> excess =
      (hull.min_mm - pt).cwiseMax(pt - hull.max_mm).cwiseMax(Scalar(0));
  return excess.norm();
}

/// Each face moved outward by zd + zr on its axis. Realizes the human and
/// robot sensing uncertainty terms as a per-axis expansion of the hull.
template <typename Scalar, typename DerivedD, typename DerivedR>
Aabb<Scalar> inflate_hull(const Aabb<Scalar>& hull, const Eigen::MatrixBase<DerivedD>& zd,
                          const Eigen::MatrixBase<DerivedR>& zr) {
  const Vec3<Scalar> zd_mm = zd;
  const Vec3<Scalar> zr_mm = zr;
  if ((zd_mm.array() < Scalar(0)).any() || (zr_mm.array() < Scalar(0)).any()) {
    throw ConfigError("hull inflation components must be non-negative");
  }
  Aabb<Scalar> out = hull;
  out.min_mm -= zd_mm + zr_mm;
  out.max_mm += zd_mm + zr_mm;
  return out;
}

}  // namespace hrsf
