#include "assistlab/input/input_synth.hpp"

#include <cmath>
#include <stdexcept>

namespace assistlab {

std::string_view to_string(InputKind kind) {
  switch (kind) {
    case InputKind::Scripted: return "scripted";
    case InputKind::PurePursuit: return "pure-pursuit";
    case InputKind::NoisyPursuit: return "noisy-pursuit";
  }
  return "scripted";
}

std::optional<InputKind> parse_input_kind(std::string_view name) {
  if (name == "scripted") return InputKind::Scripted;
  if (name == "pure-pursuit") return InputKind::PurePursuit;
  if (name == "noisy-pursuit") return InputKind::NoisyPursuit;
  return std::nullopt;
}

void InputModel::validate(double dt) const {
  if (!(tremorSigma >= 0) || !std::isfinite(tremorSigma))
    throw std::invalid_argument("input.tremorSigma must be >= 0");
  if (!(reactionDelay >= 0) || !std::isfinite(reactionDelay))
    throw std::invalid_argument("input.reactionDelay must be >= 0");
  if (kind == InputKind::Scripted) {
    for (const auto& d : script)
      if (!d.allFinite()) throw std::invalid_argument("input.script has a non-finite delta");
    return;
  }
  if (!(maxSpeed > 0) || !std::isfinite(maxSpeed))
    throw std::invalid_argument("input.maxSpeed must be > 0");
  if (!(gainP > 0) || !(gainP * dt < 1))
    throw std::invalid_argument("input.gainP must satisfy 0 < gainP * dt < 1");
}

Vec2d pursuit_delta(const InputModel& model, const Vec2d& cursor, const Vec2d& aimPoint, double dt) {
  Vec2d delta = model.gainP * (aimPoint - cursor) * dt;
  const double limit = model.maxSpeed * dt;
  const double length = delta.norm();
  if (length > limit) delta *= limit / length;
  return delta;
}

Vec2d next_delta(const InputModel& model, const Vec2d& cursor, const Vec2d& aimPoint,
                 double elapsed, double dt, InputState& state) {
  if (model.kind == InputKind::Scripted) {
    if (state.scriptPosition >= model.script.size()) return Vec2d::Zero();
    return model.script[state.scriptPosition++];
  }

  Vec2d delta = elapsed < model.reactionDelay ? Vec2d::Zero()
                                              : pursuit_delta(model, cursor, aimPoint, dt);
  if (model.kind == InputKind::NoisyPursuit) {
    // drawn every tick, including during the reaction delay
    const auto [nx, ny] = state.rng.gaussian_pair();
    delta += model.tremorSigma * Vec2d(nx, ny);
  }
  return delta;
}

InputModel mouse_like_profile(std::uint64_t seed) {
  InputModel m;
  m.kind = InputKind::NoisyPursuit;
  m.gainP = 8.0;
  m.maxSpeed = 4000.0;
  m.tremorSigma = 0.1;
  m.reactionDelay = 0.15;
  m.seed = seed;
  return m;
}

InputModel head_like_profile(std::uint64_t seed) {
  InputModel m;
  m.kind = InputKind::NoisyPursuit;
  m.gainP = 1.5;
  m.maxSpeed = 1500.0;
  m.tremorSigma = 1.2;
  m.reactionDelay = 0.3;
  m.seed = seed;
  return m;
}

InputModel image_like_profile(std::uint64_t seed) {
  InputModel m;
  m.kind = InputKind::NoisyPursuit;
  m.gainP = 1.25;
  m.maxSpeed = 1200.0;
  m.tremorSigma = 2.0;
  m.reactionDelay = 0.4;
  m.seed = seed;
  return m;
}

std::optional<InputModel> named_profile(std::string_view name, std::uint64_t seed) {
  if (name == "mouse-like") return mouse_like_profile(seed);
  if (name == "head-like") return head_like_profile(seed);
  if (name == "image-like") return image_like_profile(seed);
  return std::nullopt;
}

}  // namespace assistlab
