#include "hrsf/sim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "hrsf/sim/synthetic.hpp"

namespace hrsf {

namespace {

long ceil_steps(double duration_ms, double dt_ms) {
  if (duration_ms <= 0) return 0;
  return static_cast<long>(std::ceil(duration_ms / dt_ms - 1e-9));
}

class WorkCellSim {
 public:
  WorkCellSim(const ScenarioConfig& config, BaselineKind baseline, std::uint64_t seed)
      : cfg_(config),
        baseline_(baseline),
        plan_(config.dh, config.trajectory),
        rng_(seed) {
    dt_s_ = cfg_.sim.dt_ms / 1000.0;
    effective_cmd_ = initial_command();
    reg_state_.hysteresis_margin_mm = cfg_.hysteresis.margin_mm;
    reg_state_.clear_frames_required = cfg_.hysteresis.clear_frames_required;
    reg_state_.failure_frames_required = cfg_.hysteresis.failure_frames_required;

    cap_steps_ = ceil_steps(cfg_.latency.t_cap_ms, cfg_.sim.dt_ms);
    pass_steps_ = ceil_steps(cfg_.latency.pass_ms(), cfg_.sim.dt_ms);
    plc_adj_steps_ = ceil_steps(cfg_.latency.t_plc_ms + cfg_.latency.t_adj_ms, cfg_.sim.dt_ms);
    period_steps_ = std::max<long>(1, ceil_steps(cfg_.latency.capture_period_ms, cfg_.sim.dt_ms));
    scan_steps_ = std::max<long>(1, ceil_steps(cfg_.laser.scan_period_ms, cfg_.sim.dt_ms));
    response_steps_ = ceil_steps(cfg_.laser.response_ms, cfg_.sim.dt_ms);
    laser_expand_mm_ = cfg_.laser.margin_mm + compute_C(cfg_.laser.detection_capacity_mm);
  }

  SimResult run() {
    const long timeout_steps =
        static_cast<long>(std::ceil(cfg_.sim.timeout_s / dt_s_));
    SimResult result;
    result.trace.push_back(make_record(0, plan_.tcp_mm(), 0.0));

    Vec3d prev_tcp = plan_.tcp_mm();
    long step = 0;
    while (!plan_.complete()) {
      if (step >= timeout_steps) {
        throw TimeoutError("scenario did not finish within " +
                           std::to_string(cfg_.sim.timeout_s) + " s of simulated time");
      }
      apply_due_commands(step);
      if (baseline_ == BaselineKind::None) {
        process_completions(step);
        capture_if_due(step);
        node_pickup(step);
        process_completions(step);
      } else if (baseline_ == BaselineKind::LaserScanner) {
        laser_scan_if_due(step);
      }
      apply_due_commands(step);

      plan_.advance(dt_s_, effective_cmd_);
      ++step;

      const Vec3d tcp = plan_.tcp_mm();
      const double act_v = (tcp - prev_tcp).norm() / dt_s_;
      prev_tcp = tcp;
      result.trace.push_back(make_record(step, tcp, act_v));
    }
    result.summary = summarize_trace(result.trace);
    return result;
  }

 private:
  struct PendingFrame {
    long exposure_step = 0;
    long available_step = 0;
    BodyPointSet points;
  };
  struct Completion {
    long step = 0;
    BodyPointSet points;
  };
  struct PendingCommand {
    long apply_step = 0;
    double velocity_mm_s = 0;
  };

  double initial_command() const {
    if (baseline_ == BaselineKind::FixedLowestSpeed) return cfg_.limits.global_min();
    return cfg_.limits.full_speed_mm_s;
  }

  double now_s(long step) const { return static_cast<double>(step) * dt_s_; }

  TraceRecord make_record(long step, const Vec3d& tcp, double act_v) const {
    TraceRecord rec;
    rec.t_s = now_s(step);
    rec.q_rad = plan_.joint_angles();
    rec.tcp_mm = tcp;
    rec.cmd_v_mm_s = effective_cmd_;
    rec.act_v_mm_s = act_v;
    rec.sep_mm = last_nearest_mm_;
    rec.limiting_part = last_limiting_;
    rec.phase = cfg_.human.phase_at(rec.t_s);
    return rec;
  }

  void apply_due_commands(long step) {
    while (!commands_.empty() && commands_.front().apply_step <= step) {
      effective_cmd_ = commands_.front().velocity_mm_s;
      commands_.pop_front();
    }
  }

  Aabbd decision_hull() const {
    const auto links = forward_kinematics(cfg_.dh, plan_.joint_angles());
    Aabbd hull = compute_protective_hull(links, cfg_.hull_padding_mm);
    if (cfg_.mode == UncertaintyMode::PerAxis) {
      hull = inflate_hull(hull, cfg_.profile.z_d_mm, cfg_.constants.z_r_mm);
    }
    return hull;
  }

  void capture_if_due(long step) {
    if (step != next_exposure_step_) return;
    next_exposure_step_ += period_steps_;

    PendingFrame frame;
    frame.exposure_step = step;
    frame.available_step = step + cap_steps_;
    frame.points = observe(step);

    if (cfg_.latency.double_processing) {
      frames_.push_back(std::move(frame));
    } else {
      completions_.push_back({frame.available_step + pass_steps_, std::move(frame.points)});
    }
  }

  void node_pickup(long step) {
    if (!cfg_.latency.double_processing) return;
    if (node_free_step_ > step || frames_.empty()) return;
    // Take the newest available frame; older backlog is stale and dropped.
    long best = -1;
    for (std::size_t i = 0; i < frames_.size(); ++i) {
      if (frames_[i].available_step <= step &&
          (best < 0 || frames_[i].exposure_step > frames_[static_cast<std::size_t>(best)].exposure_step)) {
        best = static_cast<long>(i);
      }
    }
    if (best < 0) return;
    PendingFrame frame = std::move(frames_[static_cast<std::size_t>(best)]);
    std::erase_if(frames_, [&](const PendingFrame& f) {
      return f.exposure_step <= frame.exposure_step;
    });
    node_free_step_ = step + pass_steps_;
    completions_.push_back({node_free_step_, std::move(frame.points)});
  }

  void process_completions(long step) {
    while (!completions_.empty() && completions_.front().step <= step) {
      Completion done = std::move(completions_.front());
      completions_.pop_front();
      decide(step, done.points);
    }
  }

  void decide(long step, const BodyPointSet& points) {
    const SeparationBudget budget = compute_budget(cfg_.profile, cfg_.constants,
                                                   cfg_.policy, last_measured_, cfg_.mode);
    auto [decision, next_state] = evaluate(points, decision_hull(), budget, cfg_.limits,
                                           reg_state_);
    reg_state_ = std::move(next_state);
    if (std::isfinite(decision.nearest_distance_mm)) {
      last_measured_ = decision.nearest_distance_mm;
    }
    last_nearest_mm_ = decision.nearest_distance_mm;
    last_limiting_ = decision.reason == DecisionReason::Violation
                         ? decision.limiting_part
                         : std::nullopt;
    commands_.push_back({step + plc_adj_steps_, decision.commanded_velocity_mm_s});
  }

  /// Scene content of one exposure, through the configured observation path.
  BodyPointSet observe(long step) {
    const double t = now_s(step);
    if (!cfg_.human.present_at(t)) return BodyPointSet::no_human(t);
    const auto parts = cfg_.human.sample(t);

    if (cfg_.source == ObservationSource::Rendered) {
      SyntheticOptions opts;
      opts.sigma_mm = cfg_.noise.sigma_mm;
      opts.failure_rate = cfg_.noise.failure_rate;
      opts.part_masks = cfg_.profile.method == Method::BodyPartSegmentation;
      const auto synth =
          render_synthetic_observation(parts, cfg_.intrinsics, cfg_.extrinsics,
                                       cfg_.profile.extraction_class(), t, opts, rng_);
      if (!synth.observation) {
        BodyPointSet failed;
        failed.timestamp_s = t;
        failed.class_b = cfg_.profile.extraction_class() == ExtractionClass::B;
        return failed;
      }
      return extract_body_points(synth.frame, *synth.observation, cfg_.intrinsics,
                                 cfg_.extrinsics, cfg_.extraction);
    }

    // Script source: the regulator sees the scripted points themselves,
    // optionally perturbed; failures drop the whole observation.
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const bool failed = uniform(rng_) < cfg_.noise.failure_rate;

    std::map<BodyPart, Vec3d> noisy;
    for (BodyPart part : kAllBodyParts) {
      const Vec3d noise(gauss(rng_) * cfg_.noise.sigma_mm.x(),
                        gauss(rng_) * cfg_.noise.sigma_mm.y(),
                        gauss(rng_) * cfg_.noise.sigma_mm.z());
      noisy[part] = parts.at(part) + noise;
    }

    BodyPointSet set;
    set.timestamp_s = t;
    set.class_b = cfg_.profile.extraction_class() == ExtractionClass::B;
    if (failed) return set;

    if (set.class_b) {
      for (BodyPart part : kAllBodyParts) set.points.push_back({part, noisy.at(part)});
      return set;
    }

    // Class A reports the single body point nearest the monitored hull.
    const Aabbd hull = decision_hull();
    BodyPart nearest = BodyPart::Head;
    double best = std::numeric_limits<double>::infinity();
    for (BodyPart part : kAllBodyParts) {
      const double d = point_hull_distance(parts.at(part), hull);
      if (d < best) {
        best = d;
        nearest = part;
      }
    }
    set.points.push_back({std::nullopt, noisy.at(nearest)});
    return set;
  }

  void laser_scan_if_due(long step) {
    if (step != next_scan_step_) return;
    next_scan_step_ += scan_steps_;
    const double t = now_s(step);
    bool inside = false;
    if (cfg_.human.present_at(t)) {
      for (const auto& [part, pos] : cfg_.human.sample(t)) {
        if (pos.x() >= cfg_.laser.x_min_mm - laser_expand_mm_ &&
            pos.x() <= cfg_.laser.x_max_mm + laser_expand_mm_ &&
            pos.y() >= cfg_.laser.y_min_mm - laser_expand_mm_ &&
            pos.y() <= cfg_.laser.y_max_mm + laser_expand_mm_) {
          inside = true;
          break;
        }
      }
    }
    const double v = inside ? cfg_.limits.global_min() : cfg_.limits.full_speed_mm_s;
    commands_.push_back({step + response_steps_, v});
  }

  const ScenarioConfig& cfg_;
  BaselineKind baseline_;
  MotionPlan plan_;
  std::mt19937_64 rng_;

  double dt_s_ = 1e-3;
  double effective_cmd_ = 0;
  RegulatorState reg_state_;
  std::optional<double> last_measured_;
  double last_nearest_mm_ = std::numeric_limits<double>::infinity();
  std::optional<BodyPart> last_limiting_;

  long cap_steps_ = 0, pass_steps_ = 0, plc_adj_steps_ = 0, period_steps_ = 1;
  long scan_steps_ = 1, response_steps_ = 0;
  double laser_expand_mm_ = 0;

  long next_exposure_step_ = 0;
  long next_scan_step_ = 0;
  long node_free_step_ = 0;
  std::vector<PendingFrame> frames_;
  std::deque<Completion> completions_;
  std::deque<PendingCommand> commands_;
};

}  // namespace

SimResult run_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  WorkCellSim sim(config, BaselineKind::None, seed);
  return sim.run();
}

SimResult run_baseline(const ScenarioConfig& config, BaselineKind kind,
                       std::uint64_t seed) {
  config.validate();
  WorkCellSim sim(config, kind, seed);
  return sim.run();
}

TraceSummary laser_scanner_baseline(const ScenarioConfig& config, std::uint64_t seed) {
  return run_baseline(config, BaselineKind::LaserScanner, seed).summary;
}

TraceSummary fixed_speed_baseline(const ScenarioConfig& config, std::uint64_t seed) {
  return run_baseline(config, BaselineKind::FixedLowestSpeed, seed).summary;
}

}  // namespace hrsf
