#include "assistlab/core/assist.hpp"

namespace assistlab {

std::string_view to_string(AssistMode mode) {
  switch (mode) {
    case AssistMode::None: return "none";
    case AssistMode::Interpolation: return "interpolation";
    case AssistMode::GravityMap: return "gravity";
  }
  return "none";
}

std::optional<AssistMode> parse_assist_mode(std::string_view name) {
  if (name == "none") return AssistMode::None;
  if (name == "interpolation") return AssistMode::Interpolation;
  if (name == "gravity" || name == "gravity-map") return AssistMode::GravityMap;
  return std::nullopt;
}

}  // namespace assistlab
