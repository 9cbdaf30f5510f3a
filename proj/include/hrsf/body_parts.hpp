#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace hrsf {

/// The ten human body regions tracked by the part-level perception methods.
enum class BodyPart : std::uint8_t {
  Head,
  Body,
  LeftUpperArm,
  RightUpperArm,
  LeftLowerArm,
  RightLowerArm,
  LeftUpperLeg,
  RightUpperLeg,
  LeftLowerLeg,
  RightLowerLeg,
};

inline constexpr std::size_t kBodyPartCount = 10;

inline constexpr std::array<BodyPart, kBodyPartCount> kAllBodyParts = {
    BodyPart::Head,         BodyPart::Body,          BodyPart::LeftUpperArm,
    BodyPart::RightUpperArm, BodyPart::LeftLowerArm, BodyPart::RightLowerArm,
    BodyPart::LeftUpperLeg, BodyPart::RightUpperLeg, BodyPart::LeftLowerLeg,
    BodyPart::RightLowerLeg,
};

/// Stable lowercase token, also used verbatim in trace CSV output.
constexpr std::string_view to_token(BodyPart part) {
  switch (part) {
    case BodyPart::Head: return "head";
    case BodyPart::Body: return "body";
    case BodyPart::LeftUpperArm: return "l_upper_arm";
    case BodyPart::RightUpperArm: return "r_upper_arm";
    case BodyPart::LeftLowerArm: return "l_lower_arm";
    case BodyPart::RightLowerArm: return "r_lower_arm";
    case BodyPart::LeftUpperLeg: return "l_upper_leg";
    case BodyPart::RightUpperLeg: return "r_upper_leg";
    case BodyPart::LeftLowerLeg: return "l_lower_leg";
    case BodyPart::RightLowerLeg: return "r_lower_leg";
  }
  return "unknown";
}

constexpr std::optional<BodyPart> body_part_from_token(std::string_view token) {
  for (BodyPart part : kAllBodyParts) {
    if (to_token(part) == token) return part;
  }
  return std::nullopt;
}

}  // namespace hrsf
