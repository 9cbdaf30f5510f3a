#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hrsf/config/scenario.hpp"
#include "hrsf/log.hpp"
#include "hrsf/sim/simulation.hpp"

namespace {

using hrsf::BaselineKind;
using hrsf::Method;
using hrsf::ScenarioConfig;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitTimeout = 3;

struct SweepTarget {
  std::string name;
  std::optional<Method> method;  // empty for baselines
  BaselineKind baseline = BaselineKind::None;
};

std::optional<SweepTarget> parse_target(const std::string& name) {
  if (name == "LaserScanner") return SweepTarget{name, std::nullopt, BaselineKind::LaserScanner};
  if (name == "FixedLowestSpeed") {
    return SweepTarget{name, std::nullopt, BaselineKind::FixedLowestSpeed};
  }
  if (const auto m = hrsf::method_from_name(name)) {
    return SweepTarget{name, m, BaselineKind::None};
  }
  return std::nullopt;
}

void apply_mode_flag(ScenarioConfig& cfg, const std::string& mode) {
  if (mode.empty()) return;
  if (mode == "per-axis") {
    cfg.mode = hrsf::UncertaintyMode::PerAxis;
  } else if (mode == "scalar") {
    cfg.mode = hrsf::UncertaintyMode::Scalar;
  } else {
    throw hrsf::ConfigError("--mode must be 'per-axis' or 'scalar'");
  }
}

json summary_to_json(const hrsf::TraceSummary& summary) {
  json phases;
  for (const auto& [phase, share] : summary.phase_share) {
    phases[std::string(hrsf::to_token(phase))] = share;
  }
  return json{{"t_cycle_s", summary.t_cycle_s},
              {"mean_s", summary.mean_s},
              {"std_s", summary.std_s},
              {"runs", summary.runs},
              {"records", summary.records},
              {"phase_share", phases}};
}

hrsf::SimResult run_target(const ScenarioConfig& cfg, const SweepTarget& target,
                           std::uint64_t seed) {
  if (target.baseline != BaselineKind::None) {
    return hrsf::run_baseline(cfg, target.baseline, seed);
  }
  return hrsf::run_scenario(cfg.with_method(*target.method), seed);
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, const std::string& mode) {
  ScenarioConfig cfg = hrsf::load_scenario(config_path);
  apply_mode_flag(cfg, mode);
  const std::uint64_t used_seed = seed.value_or(cfg.sim.seed);

  std::filesystem::create_directories(out_dir);
  const auto result = hrsf::run_scenario(cfg, used_seed);

  const std::string trace_path = out_dir + "/trace.csv";
  hrsf::write_trace_csv(result.trace, trace_path);

  json summary = summary_to_json(result.summary);
  summary["method"] = hrsf::method_name(cfg.profile.method);
  summary["seed"] = used_seed;
  std::ofstream summary_file(out_dir + "/summary.json", std::ios::binary);
  if (!summary_file) throw hrsf::ConfigError("cannot write " + out_dir + "/summary.json");
  summary_file << summary.dump(2) << "\n";

  hrsf::log_info("run complete: t_cycle=%.3f s, trace=%s", result.summary.t_cycle_s,
                 trace_path.c_str());
  std::printf("t_cycle_s=%.3f\n", result.summary.t_cycle_s);
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::string& profiles_csv, int repeats,
              std::optional<std::uint64_t> seed, const std::string& mode) {
  if (repeats < 1) throw hrsf::ConfigError("--repeats must be >= 1");
  ScenarioConfig cfg = hrsf::load_scenario(config_path);
  apply_mode_flag(cfg, mode);
  const std::uint64_t base_seed = seed.value_or(cfg.sim.seed);

  std::vector<SweepTarget> targets;
  {
    std::string token;
    std::istringstream stream(profiles_csv);
    while (std::getline(stream, token, ',')) {
      if (token.empty()) continue;
      const auto target = parse_target(token);
      if (!target) throw hrsf::ConfigError("unknown profile in --profiles: " + token);
      targets.push_back(*target);
    }
  }
  if (targets.empty()) throw hrsf::ConfigError("--profiles selected nothing");
  std::sort(targets.begin(), targets.end(),
            [](const SweepTarget& a, const SweepTarget& b) { return a.name < b.name; });

  std::filesystem::create_directories(out_dir);

  json rows = json::array();
  std::printf("%-24s %10s %10s %6s\n", "method", "mean_s", "std_s", "runs");
  for (const auto& target : targets) {
    std::vector<double> cycles;
    cycles.reserve(static_cast<std::size_t>(repeats));
    for (int i = 0; i < repeats; ++i) {
      const auto result = run_target(cfg, target, base_seed + static_cast<std::uint64_t>(i));
      cycles.push_back(result.summary.t_cycle_s);
    }
    double mean = 0;
    for (double c : cycles) mean += c;
    mean /= static_cast<double>(cycles.size());
    double var = 0;
    for (double c : cycles) var += (c - mean) * (c - mean);
    const double stddev =
        cycles.size() > 1 ? std::sqrt(var / static_cast<double>(cycles.size() - 1)) : 0.0;

    std::printf("%-24s %10.3f %10.3f %6d\n", target.name.c_str(), mean, stddev, repeats);
    rows.push_back(json{{"method", target.name},
                        {"mean_s", mean},
                        {"std_s", stddev},
                        {"runs", repeats},
                        {"cycles_s", cycles}});
  }

  json out = json{{"schema_version", 1}, {"base_seed", base_seed}, {"rows", rows}};
  std::ofstream file(out_dir + "/sweep.json", std::ios::binary);
  if (!file) throw hrsf::ConfigError("cannot write " + out_dir + "/sweep.json");
  file << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& config_path) {
  const ScenarioConfig cfg = hrsf::load_scenario(config_path);
  hrsf::validate_scenario_deep(cfg);
  std::printf("config ok: %d joints, method %s, %zu human keyframes\n", cfg.dh.dof(),
              hrsf::method_name(cfg.profile.method).c_str(), cfg.human.keyframes.size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speed-and-separation-monitoring work-cell simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", mode;
  std::optional<std::uint64_t> seed;
  std::string profiles =
      "BodyRecognition,PoseEstimation,BodySegmentation,BodyPartSegmentation,"
      "LaserScanner,FixedLowestSpeed";
  int repeats = 10;

  auto* run = app.add_subcommand("run", "simulate one scenario and write trace + summary");
  run->add_option("--config", config_path, "scenario config JSON")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "RNG seed (overrides config)");
  run->add_option("--mode", mode, "uncertainty mode: per-axis|scalar");

  auto* sweep = app.add_subcommand("sweep", "compare methods over repeated runs");
  sweep->add_option("--config", config_path, "scenario config JSON")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--profiles", profiles, "comma-separated method/baseline list");
  sweep->add_option("--repeats", repeats, "runs per method");
  sweep->add_option("--seed", seed, "base RNG seed (overrides config)");
  sweep->add_option("--mode", mode, "uncertainty mode: per-axis|scalar");

  auto* validate = app.add_subcommand("validate", "check a scenario config");
  validate->add_option("--config", config_path, "scenario config JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, seed, mode);
    if (sweep->parsed()) return cmd_sweep(config_path, out_dir, profiles, repeats, seed, mode);
    if (validate->parsed()) return cmd_validate(config_path);
  } catch (const hrsf::TimeoutError& e) {
    std::fprintf(stderr, "timeout: %s\n", e.what());
    return kExitTimeout;
  } catch (const hrsf::ConfigError& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}
