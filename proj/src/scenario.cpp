#include "hrsf/config/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hrsf {

using nlohmann::json;

void ScenarioConfig::validate() const {
  if (schema_version != 1) {
    throw ConfigError("unsupported schema_version " + std::to_string(schema_version));
  }
  dh.validate();
  if ((hull_padding_mm.array() < 0).any()) {
    throw ConfigError("robot.hull_padding_mm must be non-negative");
  }
  intrinsics.validate();
  extrinsics.validate();
  profile.validate();
  constants.validate();
  policy.validate();
  limits.validate();
  if (hysteresis.margin_mm < 0 || hysteresis.clear_frames_required < 1 ||
      hysteresis.failure_frames_required < 1) {
    throw ConfigError("safety.hysteresis parameters out of range");
  }
  if (extraction.roi_w_px < 1 || extraction.roi_h_px < 1) {
    throw ConfigError("perception.roi_px must be at least 1x1");
  }
  if (!(extraction.window.min_mm >= 0) ||
      extraction.window.max_mm < extraction.window.min_mm) {
    throw ConfigError("perception depth window is inverted");
  }
  latency.validate_against(profile.t_lat_max_ms);
  trajectory.validate(dh.dof(), limits.full_speed_mm_s);
  human.validate();
  noise.validate();
  laser.validate();
  sim.validate();
}

void validate_scenario_deep(const ScenarioConfig& config) {
  config.validate();

  // The shipped latency table must reproduce the expected S_h budget under
  // the default 1.6 m/s far-field assumption.
  const HumanSpeedPolicy default_policy;
  const struct { Method m; long s_h_mm; } expected[] = {
      {Method::BodyRecognition, 592},
      {Method::PoseEstimation, 488},
      {Method::BodySegmentation, 894},
      {Method::BodyPartSegmentation, 1299},
  };
  for (const auto& row : expected) {
    const MethodProfile profile = builtin_profile(row.m);
    const long got =
        round_to_mm(compute_Sh(profile.t_lat_max_ms, default_policy, 1000.0));
    if (got != row.s_h_mm) {
      throw ConfigError("builtin S_h for " + method_name(row.m) + " computes to " +
                        std::to_string(got) + " mm, expected " +
                        std::to_string(row.s_h_mm) + " mm");
    }
  }
}

namespace {

const json& need(const json& j, const char* key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError("missing field " + path + "." + key);
  return *it;
}

double need_num(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number()) throw ConfigError("field " + path + "." + key + " must be a number");
  return v.get<double>();
}

double opt_num(const json& j, const char* key, double fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : it->get<double>();
}

Vec3d need_vec3(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_array() || v.size() != 3) {
    throw ConfigError("field " + path + "." + key + " must be a 3-element array");
  }
  return Vec3d(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

json vec3_to_json(const Vec3d& v) { return json::array({v.x(), v.y(), v.z()}); }

VecXd json_to_vecx(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError("field " + path + " must be an array");
  VecXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<long>(i)] = v[i].get<double>();
  return out;
}

json vecx_to_json(const VecXd& v) {
  json out = json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

MethodProfile parse_profile(const json& j) {
  if (j.is_string()) {
    const auto m = method_from_name(j.get<std::string>());
    if (!m) throw ConfigError("safety.profile: unknown method name " + j.get<std::string>());
    return builtin_profile(*m);
  }
  MethodProfile profile;
  const auto m = method_from_name(need(j, "name", "safety.profile").get<std::string>());
  if (!m) throw ConfigError("safety.profile.name: unknown method");
  profile.method = *m;
  profile.t_lat_max_ms = need_num(j, "t_lat_max_ms", "safety.profile");
  profile.z_d_mm = need_vec3(j, "z_d_mm", "safety.profile");
  return profile;
}

json profile_to_json(const MethodProfile& profile) {
  return json{{"name", method_name(profile.method)},
              {"t_lat_max_ms", profile.t_lat_max_ms},
              {"z_d_mm", vec3_to_json(profile.z_d_mm)}};
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ScenarioConfig cfg;
  cfg.schema_version = static_cast<int>(need_num(j, "schema_version", "$"));

  const json& robot = need(j, "robot", "$");
  const json& dh_rows = need(robot, "dh", "robot");
  if (!dh_rows.is_array() || dh_rows.empty()) {
    throw ConfigError("robot.dh must be a non-empty array");
  }
  for (std::size_t i = 0; i < dh_rows.size(); ++i) {
    const std::string path = "robot.dh[" + std::to_string(i) + "]";
    DhRowd row;
    row.a_mm = need_num(dh_rows[i], "a_mm", path);
    row.alpha_rad = need_num(dh_rows[i], "alpha_rad", path);
    row.d_mm = need_num(dh_rows[i], "d_mm", path);
    row.theta0_rad = opt_num(dh_rows[i], "theta0_rad", 0.0);
    cfg.dh.joints.push_back(row);
  }
  if (robot.contains("tool_offset_mm")) {
    cfg.dh.tool_offset_mm = need_vec3(robot, "tool_offset_mm", "robot");
  }
  cfg.hull_padding_mm = need_vec3(robot, "hull_padding_mm", "robot");

  const json& camera = need(j, "camera", "$");
  const json& intr = need(camera, "intrinsics", "camera");
  cfg.intrinsics.fx_px = need_num(intr, "fx_px", "camera.intrinsics");
  cfg.intrinsics.fy_px = need_num(intr, "fy_px", "camera.intrinsics");
  cfg.intrinsics.cx_px = need_num(intr, "cx_px", "camera.intrinsics");
  cfg.intrinsics.cy_px = need_num(intr, "cy_px", "camera.intrinsics");
  cfg.intrinsics.width_px = static_cast<int>(need_num(intr, "width_px", "camera.intrinsics"));
  cfg.intrinsics.height_px = static_cast<int>(need_num(intr, "height_px", "camera.intrinsics"));
  const json& extr = need(camera, "extrinsics", "camera");
  const json& rot = need(extr, "rotation", "camera.extrinsics");
  if (!rot.is_array() || rot.size() != 3) {
    throw ConfigError("camera.extrinsics.rotation must be a 3x3 array");
  }
  for (int r = 0; r < 3; ++r) {
    if (!rot[static_cast<std::size_t>(r)].is_array() || rot[static_cast<std::size_t>(r)].size() != 3) {
      throw ConfigError("camera.extrinsics.rotation must be a 3x3 array");
    }
    for (int c = 0; c < 3; ++c) {
      cfg.extrinsics.rotation(r, c) = rot[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
  }
  cfg.extrinsics.translation_mm = need_vec3(extr, "translation_mm", "camera.extrinsics");

  const json& safety = need(j, "safety", "$");
  cfg.profile = parse_profile(need(safety, "profile", "safety"));
  if (safety.contains("constants")) {
    const json& consts = safety["constants"];
    cfg.constants.s_r_mm = opt_num(consts, "s_r_mm", cfg.constants.s_r_mm);
    cfg.constants.s_s_mm = opt_num(consts, "s_s_mm", cfg.constants.s_s_mm);
    if (consts.contains("z_r_mm")) cfg.constants.z_r_mm = need_vec3(consts, "z_r_mm", "safety.constants");
    cfg.constants.detection_capacity_mm =
        opt_num(consts, "detection_capacity_mm", cfg.constants.detection_capacity_mm);
  }
  if (safety.contains("policy")) {
    const json& policy = safety["policy"];
    cfg.policy.v_far_mm_s = opt_num(policy, "v_far_mm_s", cfg.policy.v_far_mm_s);
    cfg.policy.v_near_mm_s = opt_num(policy, "v_near_mm_s", cfg.policy.v_near_mm_s);
    cfg.policy.near_threshold_mm = opt_num(policy, "near_threshold_mm", cfg.policy.near_threshold_mm);
  }
  const std::string mode = need(safety, "mode", "safety").get<std::string>();
  if (mode == "per-axis") {
    cfg.mode = UncertaintyMode::PerAxis;
  } else if (mode == "scalar") {
    cfg.mode = UncertaintyMode::Scalar;
  } else {
    throw ConfigError("safety.mode must be 'per-axis' or 'scalar'");
  }
  const json& limits = need(safety, "velocity_limits_mm_s", "safety");
  cfg.limits.limits_mm_s.clear();
  cfg.limits.full_speed_mm_s = need_num(limits, "full_speed", "safety.velocity_limits_mm_s");
  for (BodyPart part : kAllBodyParts) {
    const std::string token(to_token(part));
    if (!limits.contains(token)) {
      throw ConfigError("safety.velocity_limits_mm_s is missing body part '" + token + "'");
    }
    cfg.limits.limits_mm_s[part] = limits[token].get<double>();
  }
  if (safety.contains("hysteresis")) {
    const json& hyst = safety["hysteresis"];
    cfg.hysteresis.margin_mm = opt_num(hyst, "margin_mm", 0.0);
    cfg.hysteresis.clear_frames_required =
        static_cast<int>(opt_num(hyst, "clear_frames_required", 1));
    cfg.hysteresis.failure_frames_required =
        static_cast<int>(opt_num(hyst, "failure_frames_required", 1));
  }

  if (j.contains("perception")) {
    const json& percep = j["perception"];
    cfg.extraction.window.min_mm = opt_num(percep, "d_thres_mm", cfg.extraction.window.min_mm);
    cfg.extraction.window.max_mm = opt_num(percep, "d_max_mm", cfg.extraction.window.max_mm);
    cfg.extraction.roi_w_px = static_cast<int>(opt_num(percep, "roi_w_px", cfg.extraction.roi_w_px));
    cfg.extraction.roi_h_px = static_cast<int>(opt_num(percep, "roi_h_px", cfg.extraction.roi_h_px));
    if (percep.contains("mask_selection")) {
      const std::string sel = percep["mask_selection"].get<std::string>();
      if (sel == "nearest_world_origin") {
        cfg.extraction.mask_selection = MaskSelection::NearestWorldOrigin;
      } else if (sel == "min_camera_depth") {
        cfg.extraction.mask_selection = MaskSelection::MinCameraDepth;
      } else {
        throw ConfigError("perception.mask_selection must be 'nearest_world_origin' or 'min_camera_depth'");
      }
    }
    if (percep.contains("observation_source")) {
      const std::string src = percep["observation_source"].get<std::string>();
      if (src == "script") {
        cfg.source = ObservationSource::Script;
      } else if (src == "rendered") {
        cfg.source = ObservationSource::Rendered;
      } else {
        throw ConfigError("perception.observation_source must be 'script' or 'rendered'");
      }
    }
  }

  cfg.latency = PipelineLatencyModel::builtin(cfg.profile.method);
  if (j.contains("latency")) {
    const json& lat = j["latency"];
    cfg.latency.capture_period_ms = opt_num(lat, "capture_period_ms", cfg.latency.capture_period_ms);
    cfg.latency.t_cap_ms = opt_num(lat, "t_cap_ms", cfg.latency.t_cap_ms);
    cfg.latency.t_alg_ms = opt_num(lat, "t_alg_ms", cfg.latency.t_alg_ms);
    cfg.latency.t_3d_ms = opt_num(lat, "t_3d_ms", cfg.latency.t_3d_ms);
    cfg.latency.t_plc_ms = opt_num(lat, "t_plc_ms", cfg.latency.t_plc_ms);
    cfg.latency.t_adj_ms = opt_num(lat, "t_adj_ms", cfg.latency.t_adj_ms);
    if (lat.contains("double_processing")) {
      cfg.latency.double_processing = lat["double_processing"].get<bool>();
    }
  }

  const json& traj = need(j, "trajectory", "$");
  cfg.trajectory.start_q_rad = json_to_vecx(need(traj, "start_q_rad", "trajectory"),
                                            "trajectory.start_q_rad");
  const json& actions = need(traj, "actions", "trajectory");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string path = "trajectory.actions[" + std::to_string(i) + "]";
    const std::string kind = need(actions[i], "type", path).get<std::string>();
    TrajectoryAction action;
    if (kind == "move") {
      action.kind = TrajectoryAction::Kind::Move;
      action.target_q_rad = json_to_vecx(need(actions[i], "target_q_rad", path),
                                         path + ".target_q_rad");
      action.speed_mm_s = need_num(actions[i], "speed_mm_s", path);
    } else if (kind == "dwell") {
      action.kind = TrajectoryAction::Kind::Dwell;
      action.dwell_s = need_num(actions[i], "duration_s", path);
    } else {
      throw ConfigError(path + ".type must be 'move' or 'dwell'");
    }
    cfg.trajectory.actions.push_back(std::move(action));
  }

  const json& human = need(j, "human", "$");
  for (std::size_t i = 0; i < human.size(); ++i) {
    const std::string path = "human[" + std::to_string(i) + "]";
    HumanKeyframe kf;
    kf.t_s = need_num(human[i], "t_s", path);
    kf.phase = phase_from_token(need(human[i], "phase", path).get<std::string>());
    const json& parts = need(human[i], "parts_mm", path);
    for (BodyPart part : kAllBodyParts) {
      const std::string token(to_token(part));
      if (!parts.contains(token)) {
        throw ConfigError(path + ".parts_mm is missing body part '" + token + "'");
      }
      kf.parts_mm[part] = need_vec3(parts, token.c_str(), path + ".parts_mm");
    }
    cfg.human.keyframes.push_back(std::move(kf));
  }

  if (j.contains("noise")) {
    const json& noise = j["noise"];
    if (noise.contains("sigma_mm")) cfg.noise.sigma_mm = need_vec3(noise, "sigma_mm", "noise");
    cfg.noise.failure_rate = opt_num(noise, "failure_rate", 0.0);
  }

  if (j.contains("laser")) {
    const json& laser = j["laser"];
    cfg.laser.x_min_mm = need_num(laser, "x_min_mm", "laser");
    cfg.laser.x_max_mm = need_num(laser, "x_max_mm", "laser");
    cfg.laser.y_min_mm = need_num(laser, "y_min_mm", "laser");
    cfg.laser.y_max_mm = need_num(laser, "y_max_mm", "laser");
    cfg.laser.margin_mm = need_num(laser, "margin_mm", "laser");
    cfg.laser.detection_capacity_mm =
        opt_num(laser, "detection_capacity_mm", cfg.laser.detection_capacity_mm);
    cfg.laser.scan_period_ms = opt_num(laser, "scan_period_ms", cfg.laser.scan_period_ms);
    cfg.laser.response_ms = opt_num(laser, "response_ms", cfg.laser.response_ms);
  }

  if (j.contains("sim")) {
    const json& sim = j["sim"];
    cfg.sim.dt_ms = opt_num(sim, "dt_ms", cfg.sim.dt_ms);
    cfg.sim.timeout_s = opt_num(sim, "timeout_s", cfg.sim.timeout_s);
    if (sim.contains("seed")) cfg.sim.seed = sim["seed"].get<std::uint64_t>();
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_scenario(buffer.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;

  json dh_rows = json::array();
  for (const auto& row : cfg.dh.joints) {
    dh_rows.push_back(json{{"a_mm", row.a_mm},
                           {"alpha_rad", row.alpha_rad},
                           {"d_mm", row.d_mm},
                           {"theta0_rad", row.theta0_rad}});
  }
  j["robot"] = json{{"dh", std::move(dh_rows)},
                    {"tool_offset_mm", vec3_to_json(cfg.dh.tool_offset_mm)},
                    {"hull_padding_mm", vec3_to_json(cfg.hull_padding_mm)}};

  json rot = json::array();
  for (int r = 0; r < 3; ++r) {
    rot.push_back(json::array({cfg.extrinsics.rotation(r, 0), cfg.extrinsics.rotation(r, 1),
                               cfg.extrinsics.rotation(r, 2)}));
  }
  j["camera"] = json{
      {"intrinsics",
       json{{"fx_px", cfg.intrinsics.fx_px},
            {"fy_px", cfg.intrinsics.fy_px},
            {"cx_px", cfg.intrinsics.cx_px},
            {"cy_px", cfg.intrinsics.cy_px},
            {"width_px", cfg.intrinsics.width_px},
            {"height_px", cfg.intrinsics.height_px}}},
      {"extrinsics",
       json{{"rotation", std::move(rot)},
            {"translation_mm", vec3_to_json(cfg.extrinsics.translation_mm)}}}};

  json limits;
  limits["full_speed"] = cfg.limits.full_speed_mm_s;
  for (BodyPart part : kAllBodyParts) {
    limits[std::string(to_token(part))] = cfg.limits.limits_mm_s.at(part);
  }
  j["safety"] = json{
      {"profile", profile_to_json(cfg.profile)},
      {"constants",
       json{{"s_r_mm", cfg.constants.s_r_mm},
            {"s_s_mm", cfg.constants.s_s_mm},
            {"z_r_mm", vec3_to_json(cfg.constants.z_r_mm)},
            {"detection_capacity_mm", cfg.constants.detection_capacity_mm}}},
      {"policy",
       json{{"v_far_mm_s", cfg.policy.v_far_mm_s},
            {"v_near_mm_s", cfg.policy.v_near_mm_s},
            {"near_threshold_mm", cfg.policy.near_threshold_mm}}},
      {"mode", cfg.mode == UncertaintyMode::PerAxis ? "per-axis" : "scalar"},
      {"velocity_limits_mm_s", std::move(limits)},
      {"hysteresis",
       json{{"margin_mm", cfg.hysteresis.margin_mm},
            {"clear_frames_required", cfg.hysteresis.clear_frames_required},
            {"failure_frames_required", cfg.hysteresis.failure_frames_required}}}};

  j["perception"] = json{
      {"d_thres_mm", cfg.extraction.window.min_mm},
      {"d_max_mm", cfg.extraction.window.max_mm},
      {"roi_w_px", cfg.extraction.roi_w_px},
      {"roi_h_px", cfg.extraction.roi_h_px},
      {"mask_selection", cfg.extraction.mask_selection == MaskSelection::NearestWorldOrigin
                             ? "nearest_world_origin"
                             : "min_camera_depth"},
      {"observation_source",
       cfg.source == ObservationSource::Script ? "script" : "rendered"}};

  j["latency"] = json{{"capture_period_ms", cfg.latency.capture_period_ms},
                      {"t_cap_ms", cfg.latency.t_cap_ms},
                      {"t_alg_ms", cfg.latency.t_alg_ms},
                      {"t_3d_ms", cfg.latency.t_3d_ms},
                      {"t_plc_ms", cfg.latency.t_plc_ms},
                      {"t_adj_ms", cfg.latency.t_adj_ms},
                      {"double_processing", cfg.latency.double_processing}};

  json actions = json::array();
  for (const auto& action : cfg.trajectory.actions) {
    if (action.kind == TrajectoryAction::Kind::Move) {
      actions.push_back(json{{"type", "move"},
                             {"target_q_rad", vecx_to_json(action.target_q_rad)},
                             {"speed_mm_s", action.speed_mm_s}});
    } else {
      actions.push_back(json{{"type", "dwell"}, {"duration_s", action.dwell_s}});
    }
  }
  j["trajectory"] = json{{"start_q_rad", vecx_to_json(cfg.trajectory.start_q_rad)},
                         {"actions", std::move(actions)}};

  json keyframes = json::array();
  for (const auto& kf : cfg.human.keyframes) {
    json parts;
    for (BodyPart part : kAllBodyParts) {
      parts[std::string(to_token(part))] = vec3_to_json(kf.parts_mm.at(part));
    }
    keyframes.push_back(json{{"t_s", kf.t_s},
                             {"phase", std::string(to_token(kf.phase))},
                             {"parts_mm", std::move(parts)}});
  }
  j["human"] = std::move(keyframes);

  j["noise"] = json{{"sigma_mm", vec3_to_json(cfg.noise.sigma_mm)},
                    {"failure_rate", cfg.noise.failure_rate}};

  j["laser"] = json{{"x_min_mm", cfg.laser.x_min_mm},
                    {"x_max_mm", cfg.laser.x_max_mm},
                    {"y_min_mm", cfg.laser.y_min_mm},
                    {"y_max_mm", cfg.laser.y_max_mm},
                    {"margin_mm", cfg.laser.margin_mm},
                    {"detection_capacity_mm", cfg.laser.detection_capacity_mm},
                    {"scan_period_ms", cfg.laser.scan_period_ms},
                    {"response_ms", cfg.laser.response_ms}};

  j["sim"] = json{{"dt_ms", cfg.sim.dt_ms},
                  {"timeout_s", cfg.sim.timeout_s},
                  {"seed", cfg.sim.seed}};

  return j.dump(2) + "\n";
}

}  // namespace hrsf
