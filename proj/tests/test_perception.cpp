#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "hrsf/geometry/hull.hpp"
#include "hrsf/perception/extract.hpp"
#include "hrsf/sim/synthetic.hpp"

using namespace hrsf;

namespace {

PinholeIntrinsicsd test_camera() {
  PinholeIntrinsicsd intr;
  intr.fx_px = 600;
  intr.fy_px = 600;
  intr.cx_px = 320;
  intr.cy_px = 240;
  intr.width_px = 640;
  intr.height_px = 480;
  return intr;
}

DepthImage uniform_frame(int w, int h, std::uint16_t depth) {
  DepthImage frame(w, h);
  std::fill(frame.depth_mm.begin(), frame.depth_mm.end(), depth);
  return frame;
}

// Brute-force reference: scan every pixel of the region, apply the window,
// track minimum with scanline tie-break.
std::optional<PixelDepth> brute_min_depth(const DepthImage& frame, int u0, int v0, int u1,
                                          int v1, const DepthWindow& win) {
  std::optional<PixelDepth> best;
  for (int v = std::max(v0, 0); v < std::min(v1, frame.height_px); ++v) {
    for (int u = std::max(u0, 0); u < std::min(u1, frame.width_px); ++u) {
      const double d = frame.at(u, v);
      if (!win.valid(d)) continue;
      if (!best || d < best->depth_mm) best = PixelDepth{{u, v}, d};
    }
  }
  return best;
}

}  // namespace

TEST_CASE("deproject: principal point and unit tangent") {
  const auto intr = test_camera();
  CHECK(deproject<double>(intr.cx_px, intr.cy_px, 1000, intr).isApprox(Vec3d(0, 0, 1000)));
  CHECK(deproject<double>(intr.cx_px + intr.fx_px, intr.cy_px, 1000, intr)
            .isApprox(Vec3d(1000, 0, 1000)));
  CHECK_THROWS_AS(deproject<double>(10, 10, 0, intr), ConfigError);
}

TEST_CASE("deproject: projection round trip recovers the pixel") {
  const auto intr = test_camera();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u_px(0, 639), v_px(0, 479), depth(100, 7000);
  for (int i = 0; i < 1000; ++i) {
    const double u = u_px(rng), v = v_px(rng), d = depth(rng);
    const Vec3d p = deproject<double>(u, v, d, intr);
    const auto px = project(p, intr);
    CHECK(std::abs(px.x() - u) < 1e-9);
    CHECK(std::abs(px.y() - v) < 1e-9);
  }
}

TEST_CASE("min_depth_point: values below d_thres are rejected") {
  DepthImage frame(3, 1);
  frame.set(0, 0, 400);
  frame.set(1, 0, 600);
  frame.set(2, 0, 700);
  const ClassARegion region{BoundingBox{1.5, 0.5, 3, 1}};
  const DepthWindow win{500, 8000};
  const auto hit = min_depth_point(frame, region, win);
  REQUIRE(hit.has_value());
  CHECK(hit->depth_mm == 600);
  CHECK(hit->pixel == Eigen::Vector2i(1, 0));
}

TEST_CASE("min_depth_point: nothing valid signals a failed identification") {
  auto frame = uniform_frame(4, 4, 300);
  const ClassARegion region{BoundingBox{2, 2, 4, 4}};
  CHECK(!min_depth_point(frame, region, DepthWindow{500, 8000}).has_value());
}

TEST_CASE("min_depth_point: matches exhaustive scan on fuzzed frames") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dim(4, 40);
  std::uniform_int_distribution<int> depth(0, 2000);
  std::uniform_real_distribution<double> thres(100, 1500);
  for (int trial = 0; trial < 500; ++trial) {
    const int w = dim(rng), h = dim(rng);
    DepthImage frame(w, h);
    for (auto& d : frame.depth_mm) d = static_cast<std::uint16_t>(depth(rng));
    const DepthWindow win{thres(rng), 1800};

    std::uniform_int_distribution<int> ux(0, w - 1), vx(0, h - 1);
    const int u0 = ux(rng), v0 = vx(rng);
    const int u1 = std::min(u0 + dim(rng), w), v1 = std::min(v0 + dim(rng), h);
    const BoundingBox box{(u0 + u1) / 2.0, (v0 + v1) / 2.0, static_cast<double>(u1 - u0),
                          static_cast<double>(v1 - v0)};
    const auto got = min_depth_point(frame, ClassARegion{box}, win);
    const auto want = brute_min_depth(frame, u0, v0, u1, v1, win);
    REQUIRE(got.has_value() == want.has_value());
    if (got) {
      CHECK(got->depth_mm == want->depth_mm);
      CHECK(got->pixel == want->pixel);
      CHECK(got->depth_mm >= win.min_mm);
    }
  }
}

TEST_CASE("roi_mean_depth: uniform region and rejection before averaging") {
  auto frame = uniform_frame(32, 32, 1000);
  const DepthWindow win{500, 8000};
  auto mean = roi_mean_depth(frame, {16, 16}, 10, 10, win);
  REQUIRE(mean.has_value());
  CHECK(*mean == doctest::Approx(1000));

  // Half the ROI invalid (0 depth): the mean must ignore those pixels.
  for (int v = 0; v < 32; ++v) {
    for (int u = 0; u < 16; ++u) frame.set(u, v, 0);
  }
  mean = roi_mean_depth(frame, {16, 16}, 10, 10, win);
  REQUIRE(mean.has_value());
  CHECK(*mean == doctest::Approx(1000));

  auto dead = uniform_frame(8, 8, 0);
  CHECK(!roi_mean_depth(dead, {4, 4}, 10, 10, win).has_value());
}

TEST_CASE("roi_mean_depth: matches brute-force filtered mean on fuzzed frames") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> dim(6, 48);
  std::uniform_int_distribution<int> depth(0, 3000);
  for (int trial = 0; trial < 500; ++trial) {
    const int w = dim(rng), h = dim(rng);
    DepthImage frame(w, h);
    for (auto& d : frame.depth_mm) d = static_cast<std::uint16_t>(depth(rng));
    const DepthWindow win{600, 2500};
    std::uniform_real_distribution<double> cu(0, w - 1.0), cv(0, h - 1.0);
    const Eigen::Vector2d center(cu(rng), cv(rng));

    const auto got = roi_mean_depth(frame, center, 10, 10, win);

    const int icu = static_cast<int>(std::lround(center.x()));
    const int icv = static_cast<int>(std::lround(center.y()));
    double sum = 0;
    int count = 0;
    for (int v = icv - 5; v < icv + 5; ++v) {
      for (int u = icu - 5; u < icu + 5; ++u) {
        if (u < 0 || v < 0 || u >= w || v >= h) continue;
        const double d = frame.at(u, v);
        if (!win.valid(d)) continue;
        sum += d;
        ++count;
      }
    }
    REQUIRE(got.has_value() == (count > 0));
    if (got) CHECK(*got == doctest::Approx(sum / count));
  }
}

TEST_CASE("extract: single-pixel mask with identity extrinsics") {
  const auto intr = test_camera();
  CameraExtrinsicsd extr;
  DepthImage frame(intr.width_px, intr.height_px);
  frame.set(320, 240, 2000);
  Observation obs;
  obs.payload = ClassBParts{PartMaskMap{{BodyPart::Head, PixelMask{{320, 240}}}}};
  const auto set = extract_body_points(frame, obs, intr, extr, ExtractionOptions{});
  REQUIRE(set.points.size() == 1);
  CHECK(set.class_b);
  CHECK(set.points[0].part == BodyPart::Head);
  CHECK(set.points[0].position_mm.isApprox(Vec3d(0, 0, 2000)));
}

TEST_CASE("extract: part mask ordering by distance to the world origin") {
  const auto intr = test_camera();
  CameraExtrinsicsd extr;
  DepthImage frame(intr.width_px, intr.height_px);
  frame.set(100, 100, 1500);  // head, nearer
  frame.set(500, 300, 3000);  // body, farther
  Observation obs;
  obs.payload = ClassBParts{PartMaskMap{{BodyPart::Head, PixelMask{{100, 100}}},
                                        {BodyPart::Body, PixelMask{{500, 300}}}}};
  const auto set = extract_body_points(frame, obs, intr, extr, ExtractionOptions{});
  REQUIRE(set.points.size() == 2);
  double head_d = 0, body_d = 0;
  for (const auto& bp : set.points) {
    if (bp.part == BodyPart::Head) head_d = bp.position_mm.norm();
    if (bp.part == BodyPart::Body) body_d = bp.position_mm.norm();
  }
  CHECK(head_d < body_d);
}

TEST_CASE("extract: whole observation invalid yields a failed identification") {
  const auto intr = test_camera();
  CameraExtrinsicsd extr;
  const auto frame = uniform_frame(intr.width_px, intr.height_px, 100);  // below d_thres
  Observation obs;
  obs.payload = ClassARegion{BoundingBox{320, 240, 600, 400}};
  const auto set = extract_body_points(frame, obs, intr, extr, ExtractionOptions{});
  CHECK(set.points.empty());
  CHECK(set.failed_identification());
}

TEST_CASE("extract: invariant under adding invalid pixels to any mask") {
  const auto intr = test_camera();
  CameraExtrinsicsd extr;
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> u_px(0, 639), v_px(0, 479);
  std::uniform_int_distribution<int> depth(600, 4000);

  for (int trial = 0; trial < 50; ++trial) {
    DepthImage frame(intr.width_px, intr.height_px);
    PartMaskMap masks;
    for (BodyPart part : {BodyPart::Head, BodyPart::LeftLowerArm, BodyPart::RightUpperLeg}) {
      PixelMask mask;
      for (int i = 0; i < 20; ++i) {
        const int u = u_px(rng), v = v_px(rng);
        frame.set(u, v, static_cast<std::uint16_t>(depth(rng)));
        mask.push_back({u, v});
      }
      masks[part] = mask;
    }
    Observation obs;
    obs.payload = ClassBParts{masks};
    const auto base = extract_body_points(frame, obs, intr, extr, ExtractionOptions{});

    // Sprinkle zero-depth pixels into every mask.
    PartMaskMap padded = masks;
    for (auto& [part, mask] : padded) {
      for (int i = 0; i < 10; ++i) {
        const int u = u_px(rng), v = v_px(rng);
        if (frame.at(u, v) == 0) mask.push_back({u, v});
      }
    }
    Observation obs2;
    obs2.payload = ClassBParts{padded};
    const auto same = extract_body_points(frame, obs2, intr, extr, ExtractionOptions{});

    REQUIRE(base.points.size() == same.points.size());
    for (std::size_t i = 0; i < base.points.size(); ++i) {
      CHECK(base.points[i].part == same.points[i].part);
      CHECK(base.points[i].position_mm == same.points[i].position_mm);
    }
  }
}

TEST_CASE("extract: no returned camera depth below d_thres on fuzzed frames") {
  const auto intr = test_camera();
  CameraExtrinsicsd extr;
  extr.translation_mm = Vec3d(100, -50, 30);
  std::mt19937_64 rng(59);
  std::uniform_int_distribution<int> u_px(0, 639), v_px(0, 479);
  std::uniform_int_distribution<int> depth(0, 9000);
  ExtractionOptions opts;

  for (int trial = 0; trial < 200; ++trial) {
    DepthImage frame(intr.width_px, intr.height_px);
    PartMaskMap masks;
    KeypointMap keypoints;
    for (BodyPart part : kAllBodyParts) {
      PixelMask mask;
      for (int i = 0; i < 15; ++i) {
        const int u = u_px(rng), v = v_px(rng);
        frame.set(u, v, static_cast<std::uint16_t>(depth(rng)));
        mask.push_back({u, v});
      }
      masks[part] = mask;
      keypoints[part] = Eigen::Vector2d(mask.front().x(), mask.front().y());
    }

    Observation mask_obs;
    mask_obs.payload = ClassBParts{masks};
    const auto mask_set = extract_body_points(frame, mask_obs, intr, extr, opts);
    CHECK(mask_set.points.size() + mask_set.failed_parts.size() == kBodyPartCount);
    for (const auto& bp : mask_set.points) {
      REQUIRE(bp.part.has_value());
      CHECK(extr.to_camera(bp.position_mm).z() >= opts.window.min_mm);
    }

    Observation kp_obs;
    kp_obs.payload = ClassBParts{keypoints};
    const auto kp_set = extract_body_points(frame, kp_obs, intr, extr, opts);
    for (const auto& bp : kp_set.points) {
      CHECK(extr.to_camera(bp.position_mm).z() >= opts.window.min_mm);
    }
  }
}

TEST_CASE("extract: rigid-transform consistency for axis-aligned extrinsics") {
  // With an axis-permuting rotation the transformed hull stays an AABB, so
  // distance-in-world equals distance-in-camera against the pulled-back hull.
  Mat3d rot;
  rot << 0, -1, 0,
         0, 0, -1,
         1, 0, 0;
  CameraExtrinsicsd extr;
  extr.rotation = rot;
  extr.translation_mm = Vec3d(400, -250, 1250);
  extr.validate();

  Aabbd hull;
  hull.min_mm = Vec3d(-100, -300, 0);
  hull.max_mm = Vec3d(600, 200, 1100);

  std::vector<Vec3d> corners_cam;
  for (int mask = 0; mask < 8; ++mask) {
    const Vec3d corner((mask & 1) ? hull.max_mm.x() : hull.min_mm.x(),
                       (mask & 2) ? hull.max_mm.y() : hull.min_mm.y(),
                       (mask & 4) ? hull.max_mm.z() : hull.min_mm.z());
    corners_cam.push_back(extr.to_camera(corner));
  }
  const auto hull_cam = compute_protective_hull(corners_cam);

  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> coord(-2000, 2000);
  for (int i = 0; i < 500; ++i) {
    const Vec3d p_cam(coord(rng), coord(rng), coord(rng));
    const double via_world = point_hull_distance(extr.to_world(p_cam), hull);
    const double via_camera = point_hull_distance(p_cam, hull_cam);
    CHECK(std::abs(via_world - via_camera) < 1e-6);
  }
}

TEST_CASE("extract: capsule-rendered frame against analytic nearest points") {
  const auto intr = test_camera();
  CameraExtrinsicsd extr;
  // Camera 3 m behind the world origin looking along +z.
  extr.translation_mm = Vec3d(0, 0, -3000);
  extr.validate();

  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> lateral(-500, 500);
  std::uniform_real_distribution<double> depth_w(200, 1500);
  std::uniform_real_distribution<double> radius(12, 25);
  std::uniform_real_distribution<double> axis(-1, 1);

  for (int trial = 0; trial < 10; ++trial) {
    std::map<BodyPart, Vec3d> centers;
    std::map<BodyPart, CapsuleSpec> capsules;
    for (BodyPart part : kAllBodyParts) {
      centers[part] = Vec3d(lateral(rng), lateral(rng), depth_w(rng));
      Vec3d dir(axis(rng), axis(rng), axis(rng));
      if (dir.norm() < 1e-3) dir = Vec3d::UnitY();
      capsules[part] = CapsuleSpec{dir.normalized(), 40, radius(rng)};
    }

    std::map<BodyPart, PixelMask> silhouettes;
    const auto frame =
        render_capsule_depth(centers, capsules, intr, extr, 0.0, &silhouettes);

    // Class B part masks: each extracted point vs the analytic point of its
    // capsule nearest the world origin.
    Observation obs;
    PartMaskMap masks;
    for (const auto& [part, sil] : silhouettes) masks[part] = sil;
    obs.payload = ClassBParts{masks};
    const auto set = extract_body_points(frame, obs, intr, extr, ExtractionOptions{});
    CHECK(!set.points.empty());
    for (const auto& bp : set.points) {
      REQUIRE(bp.part.has_value());
      const auto& spec = capsules.at(*bp.part);
      const auto& center = centers.at(*bp.part);
      const Vec3d a = center - spec.half_len_mm * spec.axis_dir;
      const double s = std::clamp(-a.dot(spec.axis_dir), 0.0, 2.0 * spec.half_len_mm);
      const Vec3d axis_pt = a + s * spec.axis_dir;
      const Vec3d analytic = axis_pt * (1.0 - spec.radius_mm / axis_pt.norm());

      const double cam_depth = extr.to_camera(bp.position_mm).z();
      const double footprint = cam_depth * (1.0 / intr.fx_px + 1.0 / intr.fy_px);
      CHECK((bp.position_mm - analytic).norm() <= 2.0 * footprint + 1.5);
    }

    // Class A over the union silhouette: min-depth pixel vs the analytic
    // minimum-depth surface point over all capsules.
    PixelMask all_pixels;
    for (const auto& [part, sil] : silhouettes) {
      all_pixels.insert(all_pixels.end(), sil.begin(), sil.end());
    }
    Observation whole;
    whole.payload = ClassARegion{all_pixels};
    const auto whole_set = extract_body_points(frame, whole, intr, extr, ExtractionOptions{});
    REQUIRE(whole_set.points.size() == 1);

    double best_depth = std::numeric_limits<double>::infinity();
    Vec3d best_point = Vec3d::Zero();
    for (BodyPart part : kAllBodyParts) {
      const auto& spec = capsules.at(part);
      const Vec3d a_cam = extr.to_camera(centers.at(part) - spec.half_len_mm * spec.axis_dir);
      const Vec3d b_cam = extr.to_camera(centers.at(part) + spec.half_len_mm * spec.axis_dir);
      const Vec3d end = a_cam.z() <= b_cam.z() ? a_cam : b_cam;
      const double d = end.z() - spec.radius_mm;
      if (d < best_depth) {
        best_depth = d;
        best_point = extr.to_world(Vec3d(end.x(), end.y(), end.z() - spec.radius_mm));
      }
    }
    const double cam_depth = extr.to_camera(whole_set.points[0].position_mm).z();
    CHECK(std::abs(cam_depth - best_depth) <= 1.5);
    const double footprint = cam_depth * (1.0 / intr.fx_px + 1.0 / intr.fy_px);
    CHECK((whole_set.points[0].position_mm - best_point).norm() <= 2.0 * footprint + 1.5);
  }
}

TEST_CASE("extract: class B output stays within the ten labels") {
  const auto intr = test_camera();
  CameraExtrinsicsd extr;
  DepthImage frame(intr.width_px, intr.height_px);
  for (int v = 200; v < 280; ++v) {
    for (int u = 280; u < 360; ++u) frame.set(u, v, 2500);
  }
  PartMaskMap masks;
  int offset = 0;
  for (BodyPart part : kAllBodyParts) {
    masks[part] = PixelMask{{300 + offset, 240}};
    ++offset;
  }
  Observation obs;
  obs.payload = ClassBParts{masks};
  const auto set = extract_body_points(frame, obs, intr, extr, ExtractionOptions{});
  CHECK(set.points.size() <= kBodyPartCount);
  for (const auto& bp : set.points) CHECK(bp.part.has_value());
}
