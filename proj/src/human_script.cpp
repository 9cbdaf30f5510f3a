#include "hrsf/sim/human_script.hpp"

#include <algorithm>

#include "hrsf/errors.hpp"

namespace hrsf {

std::string_view to_token(Phase phase) {
  switch (phase) {
    case Phase::None: return "none";
    case Phase::Coexistence: return "coexistence";
    case Phase::Collaboration: return "collaboration";
    case Phase::Cooperation: return "cooperation";
  }
  return "none";
}

Phase phase_from_token(std::string_view token) {
  for (Phase p : {Phase::None, Phase::Coexistence, Phase::Collaboration,
                  Phase::Cooperation}) {
    if (to_token(p) == token) return p;
  }
  throw ConfigError("unknown phase token: " + std::string(token));
}

void HumanMotionScript::validate() const {
  for (std::size_t i = 0; i < keyframes.size(); ++i) {
    const auto& kf = keyframes[i];
    if (i > 0 && !(kf.t_s > keyframes[i - 1].t_s)) {
      throw ConfigError("human keyframe times must be strictly increasing");
    }
    for (BodyPart part : kAllBodyParts) {
      const auto it = kf.parts_mm.find(part);
      if (it == kf.parts_mm.end()) {
        throw ConfigError("human keyframe missing body part " +
                          std::string(to_token(part)));
      }
      if (!it->second.allFinite()) {
        throw ConfigError("human keyframe position not finite for " +
                          std::string(to_token(part)));
      }
    }
  }
}

std::map<BodyPart, Vec3d> HumanMotionScript::sample(double t_s) const {
  if (keyframes.empty()) return {};
  if (t_s <= keyframes.front().t_s) return keyframes.front().parts_mm;
  if (t_s >= keyframes.back().t_s) return keyframes.back().parts_mm;

  const auto next = std::upper_bound(
      keyframes.begin(), keyframes.end(), t_s,
      [](double t, const HumanKeyframe& kf) { return t < kf.t_s; });
  const auto prev = std::prev(next);
  const double span = next->t_s - prev->t_s;
  const double w = (t_s - prev->t_s) / span;

  std::map<BodyPart, Vec3d> out;
  for (BodyPart part : kAllBodyParts) {
    out[part] = (1.0 - w) * prev->parts_mm.at(part) + w * next->parts_mm.at(part);
  }
  return out;
}

Phase HumanMotionScript::phase_at(double t_s) const {
  if (keyframes.empty() || t_s < keyframes.front().t_s) return Phase::None;
  if (t_s >= keyframes.back().t_s) return keyframes.back().phase;
  const auto next = std::upper_bound(
      keyframes.begin(), keyframes.end(), t_s,
      [](double t, const HumanKeyframe& kf) { return t < kf.t_s; });
  return std::prev(next)->phase;
}

}  // namespace hrsf
