#pragma once

#include "assistlab/core/types.hpp"
#include "assistlab/input/random.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace assistlab {

enum class InputKind { Scripted, PurePursuit, NoisyPursuit };

std::string_view to_string(InputKind kind);
std::optional<InputKind> parse_input_kind(std::string_view name);

// Stand-in for a participant operating one device class.
struct InputModel {
  InputKind kind{InputKind::PurePursuit};
  double gainP{4.0};          // 1/s
  double maxSpeed{3000.0};    // px/s
  double tremorSigma{0.0};    // px per tick, per axis
  double reactionDelay{0.0};  // s, pursuit suppressed after each sub-task start
  std::uint64_t seed{0};
  std::vector<Vec2d> script;  // Scripted only

  /// Throws std::invalid_argument; gainP * dt must stay below 1.
  void validate(double dt) const;

  bool operator==(const InputModel&) const = default;
};

struct InputState {
  Xoshiro256ss rng;
  std::size_t scriptPosition{0};

  explicit InputState(std::uint64_t seed = 0) : rng(seed) {}
};

/// Raw delta for one tick. `elapsed` is the time since the current sub-task
/// started and `dt` the tick length, both in seconds.
Vec2d next_delta(const InputModel& model, const Vec2d& cursor, const Vec2d& aimPoint,
                 double elapsed, double dt, InputState& state);

/// Proportional pursuit step, clamped to maxSpeed * dt.
Vec2d pursuit_delta(const InputModel& model, const Vec2d& cursor, const Vec2d& aimPoint, double dt);

// Device profiles. Noise and delay grow from mouse-like to image-like.
InputModel mouse_like_profile(std::uint64_t seed = 0);
InputModel head_like_profile(std::uint64_t seed = 0);
InputModel image_like_profile(std::uint64_t seed = 0);

/// "mouse-like", "head-like" or "image-like".
std::optional<InputModel> named_profile(std::string_view name, std::uint64_t seed = 0);

}  // namespace assistlab
