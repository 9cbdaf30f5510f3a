#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hrsf/regulator/regulator.hpp"

using namespace hrsf;

namespace {

Aabbd unit_cell_hull() {
  Aabbd hull;
  hull.min_mm = Vec3d(0, 0, 0);
  hull.max_mm = Vec3d(1000, 1000, 1000);
  return hull;
}

SeparationBudget budget_with_threshold(double threshold_mm) {
  SeparationBudget budget;
  budget.s_h_mm = threshold_mm;
  budget.scalar_threshold_mm = threshold_mm;
  return budget;
}

BodyPointSet class_b_points(std::initializer_list<std::pair<BodyPart, Vec3d>> entries) {
  BodyPointSet set;
  set.class_b = true;
  for (const auto& [part, pos] : entries) set.points.push_back({part, pos});
  return set;
}

const double kExpectedLimit[] = {50, 100, 100, 100, 100, 100, 200, 200, 50, 50};

}  // namespace

TEST_CASE("limits: every label maps to its quasi-static value") {
  const auto table = VelocityLimitTable::quasi_static_defaults();
  CHECK(map_label_to_limit(BodyPart::LeftUpperLeg, table) == 200);
  CHECK(map_label_to_limit(BodyPart::RightLowerLeg, table) == 50);
  CHECK(map_label_to_limit(BodyPart::Body, table) == 100);
  CHECK(table.global_min() == 50);
  CHECK(table.full_speed_mm_s == 1600);

  std::size_t i = 0;
  for (BodyPart part : kAllBodyParts) {
    CHECK(map_label_to_limit(part, table) == kExpectedLimit[i]);
    ++i;
  }

  VelocityLimitTable missing = table;
  missing.limits_mm_s.erase(BodyPart::Head);
  CHECK_THROWS_AS(map_label_to_limit(BodyPart::Head, missing), ConfigError);
}

TEST_CASE("evaluate: each single violating part commands exactly its limit") {
  const auto table = VelocityLimitTable::quasi_static_defaults();
  const auto hull = unit_cell_hull();
  const auto budget = budget_with_threshold(500);
  std::size_t i = 0;
  for (BodyPart part : kAllBodyParts) {
    auto points = class_b_points({{part, Vec3d(1100, 500, 500)},       // 100 mm away
                                  {BodyPart::Head, Vec3d(3000, 500, 500)}});
    if (part == BodyPart::Head) {
      points = class_b_points({{part, Vec3d(1100, 500, 500)},
                               {BodyPart::Body, Vec3d(3000, 500, 500)}});
    }
    const auto [decision, state] = evaluate(points, hull, budget, table, RegulatorState{});
    CHECK(decision.reason == DecisionReason::Violation);
    CHECK(decision.commanded_velocity_mm_s == kExpectedLimit[i]);
    CHECK(decision.limiting_part == part);
    CHECK(decision.violating.size() == 1);
    ++i;
  }
}

TEST_CASE("evaluate: clear scene commands full speed") {
  const auto table = VelocityLimitTable::quasi_static_defaults();
  const auto [decision, state] =
      evaluate(class_b_points({{BodyPart::Head, Vec3d(5000, 500, 500)}}), unit_cell_hull(),
               budget_with_threshold(500), table, RegulatorState{});
  CHECK(decision.reason == DecisionReason::Clear);
  CHECK(decision.commanded_velocity_mm_s == 1600);
  CHECK(decision.nearest_distance_mm == doctest::Approx(4000));
}

TEST_CASE("evaluate: multiple violations take the minimum limit") {
  const auto table = VelocityLimitTable::quasi_static_defaults();
  const auto points = class_b_points({{BodyPart::LeftUpperLeg, Vec3d(1100, 500, 500)},
                                      {BodyPart::RightLowerArm, Vec3d(1200, 500, 500)}});
  const auto [decision, state] = evaluate(points, unit_cell_hull(),
                                          budget_with_threshold(500), table, RegulatorState{});
  CHECK(decision.reason == DecisionReason::Violation);
  CHECK(decision.commanded_velocity_mm_s == 100);  // min(200, 100)
  CHECK(decision.limiting_part == BodyPart::RightLowerArm);
  CHECK(decision.violating.size() == 2);
}

TEST_CASE("evaluate: class A violation commands the global minimum") {
  const auto table = VelocityLimitTable::quasi_static_defaults();
  BodyPointSet set;
  set.points.push_back({std::nullopt, Vec3d(1050, 500, 500)});
  const auto [decision, state] = evaluate(set, unit_cell_hull(), budget_with_threshold(500),
                                          table, RegulatorState{});
  CHECK(decision.reason == DecisionReason::Violation);
  CHECK(decision.commanded_velocity_mm_s == 50);
  CHECK(!decision.limiting_part.has_value());
}

TEST_CASE("evaluate: failed detection falls back to the global minimum") {
  const auto table = VelocityLimitTable::quasi_static_defaults();
  BodyPointSet failed;
  failed.class_b = true;  // human reported, nothing localized
  const auto [decision, state] = evaluate(failed, unit_cell_hull(),
                                          budget_with_threshold(500), table, RegulatorState{});
  CHECK(decision.reason == DecisionReason::FailedDetection);
  CHECK(decision.commanded_velocity_mm_s == 50);
  CHECK(std::isinf(decision.nearest_distance_mm));
}

TEST_CASE("evaluate: failure threshold holds the previous command first") {
  const auto table = VelocityLimitTable::quasi_static_defaults();
  RegulatorState state;
  state.failure_frames_required = 3;

  // Establish a clear decision at full speed.
  auto [d0, s0] = evaluate(class_b_points({{BodyPart::Head, Vec3d(5000, 500, 500)}}),
                           unit_cell_hull(), budget_with_threshold(500), table, state);
  CHECK(d0.commanded_velocity_mm_s == 1600);

  BodyPointSet failed;
  failed.class_b = true;
  auto [d1, s1] = evaluate(failed, unit_cell_hull(), budget_with_threshold(500), table, s0);
  CHECK(d1.reason == DecisionReason::FailedDetection);
  CHECK(d1.commanded_velocity_mm_s == 1600);  // below the failure threshold: hold
  auto [d2, s2] = evaluate(failed, unit_cell_hull(), budget_with_threshold(500), table, s1);
  CHECK(d2.commanded_velocity_mm_s == 1600);
  auto [d3, s3] = evaluate(failed, unit_cell_hull(), budget_with_threshold(500), table, s2);
  CHECK(d3.commanded_velocity_mm_s == 50);  // third consecutive failure
}

TEST_CASE("evaluate: no human commands full speed") {
  const auto table = VelocityLimitTable::quasi_static_defaults();
  const auto [decision, state] =
      evaluate(BodyPointSet::no_human(0.0), unit_cell_hull(), budget_with_threshold(500),
               table, RegulatorState{});
  CHECK(decision.reason == DecisionReason::NoHuman);
  CHECK(decision.commanded_velocity_mm_s == 1600);
}

TEST_CASE("evaluate: hysteresis requires sustained clearance to re-accelerate") {
  const auto table = VelocityLimitTable::quasi_static_defaults();
  const auto hull = unit_cell_hull();
  const auto budget = budget_with_threshold(500);
  RegulatorState state;
  state.hysteresis_margin_mm = 100;
  state.clear_frames_required = 2;

  auto violating = class_b_points({{BodyPart::Body, Vec3d(1100, 500, 500)}});
  auto [d0, s0] = evaluate(violating, hull, budget, table, state);
  CHECK(d0.commanded_velocity_mm_s == 100);

  // Clear of the threshold but inside the margin band: hold the reduction.
  auto band = class_b_points({{BodyPart::Body, Vec3d(1550, 500, 500)}});
  auto [d1, s1] = evaluate(band, hull, budget, table, s0);
  CHECK(d1.reason == DecisionReason::Clear);
  CHECK(d1.commanded_velocity_mm_s == 100);

  // Beyond threshold + margin, but only one frame so far.
  auto clear = class_b_points({{BodyPart::Body, Vec3d(1700, 500, 500)}});
  auto [d2, s2] = evaluate(clear, hull, budget, table, s1);
  CHECK(d2.commanded_velocity_mm_s == 100);
  auto [d3, s3] = evaluate(clear, hull, budget, table, s2);
  CHECK(d3.commanded_velocity_mm_s == 1600);  // second consecutive clear frame
}

TEST_CASE("evaluate: deterministic for identical inputs") {
  const auto table = VelocityLimitTable::quasi_static_defaults();
  const auto points = class_b_points({{BodyPart::LeftLowerArm, Vec3d(1040, 500, 500)},
                                      {BodyPart::Head, Vec3d(1450, 600, 400)}});
  RegulatorState state;
  state.hysteresis_margin_mm = 25;
  const auto [d1, s1] = evaluate(points, unit_cell_hull(), budget_with_threshold(500),
                                 table, state);
  const auto [d2, s2] = evaluate(points, unit_cell_hull(), budget_with_threshold(500),
                                 table, state);
  CHECK(d1.commanded_velocity_mm_s == d2.commanded_velocity_mm_s);
  CHECK(d1.reason == d2.reason);
  CHECK(d1.nearest_distance_mm == d2.nearest_distance_mm);
  CHECK(d1.limiting_part == d2.limiting_part);
}

TEST_CASE("evaluate: safety dominance and monotone conservatism (randomized)") {
  const auto table = VelocityLimitTable::quasi_static_defaults();
  const auto hull = unit_cell_hull();
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> coord(-1500, 2500);
  std::uniform_real_distribution<double> thres(100, 1200);
  std::uniform_int_distribution<int> part_pick(0, 9);
  std::uniform_int_distribution<int> count(1, 8);

  for (int trial = 0; trial < 2000; ++trial) {
    const auto budget = budget_with_threshold(thres(rng));
    BodyPointSet set;
    set.class_b = true;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      set.points.push_back({kAllBodyParts[static_cast<std::size_t>(part_pick(rng))],
                            Vec3d(coord(rng), coord(rng), coord(rng))});
    }
    const auto [decision, state] = evaluate(set, hull, budget, table, RegulatorState{});
    CHECK(decision.commanded_velocity_mm_s <= table.full_speed_mm_s);

    if (decision.reason == DecisionReason::Violation) {
      double max_violator_limit = 0;
      for (const auto& v : decision.violating) {
        REQUIRE(v.part.has_value());
        max_violator_limit = std::max(max_violator_limit, table.limit_for(*v.part));
      }
      CHECK(decision.commanded_velocity_mm_s <= max_violator_limit);

      // Adding one more violating point never increases the command.
      BodyPointSet more = set;
      more.points.push_back({BodyPart::Head, Vec3d(500, 500, 500)});
      const auto [worse, state2] = evaluate(more, hull, budget, table, RegulatorState{});
      CHECK(worse.commanded_velocity_mm_s <= decision.commanded_velocity_mm_s);
    }
  }
}

TEST_CASE("evaluate: scaling all limits scales the command, same limiting part") {
  auto table = VelocityLimitTable::quasi_static_defaults();
  const auto points = class_b_points({{BodyPart::LeftUpperLeg, Vec3d(1100, 500, 500)},
                                      {BodyPart::Head, Vec3d(1150, 500, 500)},
                                      {BodyPart::RightLowerArm, Vec3d(1250, 500, 500)}});
  const auto budget = budget_with_threshold(500);
  const auto [base, s1] = evaluate(points, unit_cell_hull(), budget, table, RegulatorState{});

  for (double k : {0.5, 2.0, 3.5}) {
    VelocityLimitTable scaled = table;
    scaled.full_speed_mm_s *= k;
    for (auto& [part, limit] : scaled.limits_mm_s) limit *= k;
    const auto [got, s2] = evaluate(points, unit_cell_hull(), budget, scaled, RegulatorState{});
    CHECK(got.commanded_velocity_mm_s ==
          doctest::Approx(base.commanded_velocity_mm_s * k));
    CHECK(got.limiting_part == base.limiting_part);
  }
}
