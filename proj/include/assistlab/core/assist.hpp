#pragma once

#include "assistlab/core/types.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace assistlab {

enum class AssistMode { None, Interpolation, GravityMap };

std::string_view to_string(AssistMode mode);
// Accepts "none", "interpolation", "gravity" and "gravity-map".
std::optional<AssistMode> parse_assist_mode(std::string_view name);

template<typename Scalar>
struct AssistConfig {
  AssistMode mode{AssistMode::None};
  // Interpolation alignment dead-zone, in [0, 1).
  Scalar influence{Scalar(0.8)};
  int predictionSteps{1};
  // Gravity-Map area-of-effect radius in pixels.
  Scalar influenceDistance{Scalar(150)};
  // Scales the gravity influence onto the raw delta, relative to |rawDelta|.
  Scalar assistGain{Scalar(1)};

  void validate() const {
    if (!(influence >= Scalar(0) && influence < Scalar(1)))
      throw std::invalid_argument("assist.influence must be in [0, 1)");
    if (predictionSteps < 1)
      throw std::invalid_argument("assist.predictionSteps must be >= 1");
    if (!(influenceDistance > Scalar(0)) || !std::isfinite(influenceDistance))
      throw std::invalid_argument("assist.influenceDistance must be > 0");
    if (!(assistGain >= Scalar(0)) || !std::isfinite(assistGain))
      throw std::invalid_argument("assist.assistGain must be >= 0");
  }

  bool operator==(const AssistConfig&) const = default;
};

using AssistConfigd = AssistConfig<double>;

/// Point of `rect` nearest to `p`, found by clamping each axis independently.
/// Returns `p` itself for interior points.
template<typename Scalar>
Vec2<Scalar> closest_point_on_rect(const Vec2<Scalar>& p, const TargetRect<Scalar>& rect) {
  return {std::clamp(p.x(), rect.x, rect.x + rect.width),
          std::clamp(p.y(), rect.y, rect.y + rect.height)};
}

/// Gravity-Map influence vector at `p`.
///
/// Each target whose closest point lies within `influenceDistance` pulls
/// toward that point with magnitude 1 - (d / influenceDistance)^2. A point
/// inside any target (checked in list order) yields a zero vector, as does a
/// target touched exactly on its open edge (d == 0).
template<typename Scalar>
Vec2<Scalar> gravity_map_influence(std::span<const TargetRect<Scalar>> targets,
                                   const Vec2<Scalar>& p,
                                   Scalar influenceDistance) {
  Vec2<Scalar> total = Vec2<Scalar>::Zero();
  for (const auto& target : targets) {
    const Vec2<Scalar> closest = closest_point_on_rect(p, target);
    if (target.contains(p)) return Vec2<Scalar>::Zero();

    const Vec2<Scalar> toward = closest - p;
    const Scalar distance = toward.norm();
    if (distance > influenceDistance) continue;
    if (distance == Scalar(0)) continue;

    const Vec2<Scalar> direction = toward / distance;
    const Scalar ratio = distance / influenceDistance;
    total += direction * (Scalar(1) - ratio * ratio);
  }
  return total;
}

template<typename Scalar>
Vec2<Scalar> gravity_map_influence(const std::vector<TargetRect<Scalar>>& targets,
                                   const Vec2<Scalar>& p,
                                   Scalar influenceDistance) {
  return gravity_map_influence(std::span<const TargetRect<Scalar>>(targets), p,
                               influenceDistance);
}

/// Interpolation prediction.
///
/// Seeds the point list with [start, start + moveVec] and appends `number`
/// predicted points. Each step is based at the second-to-last point `c`; the
/// normalized move direction is bent toward the target by
/// mod = (max(dot, influence) - influence) / (1 - influence) and the result is
/// scaled by min(|target - c|, |moveVec|). `moveVec` itself is never updated.
///
/// Returns every point except `start`, so the result has `number + 1` entries.
template<typename Scalar>
std::vector<Vec2<Scalar>> interpolation_prediction(const Vec2<Scalar>& start,
                                                   const Vec2<Scalar>& moveVec,
                                                   const Vec2<Scalar>& target,
                                                   Scalar influence = Scalar(0.8),
                                                   int number = 1) {
  if (!(influence >= Scalar(0) && influence < Scalar(1)))
    throw std::invalid_argument("interpolation_prediction: influence must be in [0, 1)");
  if (number < 1) throw std::invalid_argument("interpolation_prediction: number must be >= 1");

  std::vector<Vec2<Scalar>> points;
  points.reserve(static_cast<std::size_t>(number) + 2);
  points.push_back(start);
  points.push_back(start + moveVec);

  const Scalar moveLength = moveVec.norm();
  for (int i = 0; i < number; ++i) {
    const Vec2<Scalar> base = points[points.size() - 2];
    const Vec2<Scalar> toTarget = target - base;
    const Scalar targetDistance = toTarget.norm();
    if (moveLength == Scalar(0) || targetDistance == Scalar(0)) {
      points.push_back(base);
      continue;
    }

    const Vec2<Scalar> targetDir = toTarget / targetDistance;
    const Vec2<Scalar> moveDir = moveVec / moveLength;

    Scalar mod = std::max(targetDir.dot(moveDir), influence) - influence;
    mod = mod * (Scalar(1) / (Scalar(1) - influence));
    mod = std::min(mod, Scalar(1));  // dot can round above 1

    // component-wise lerp, not re-normalized
    const Vec2<Scalar> bent = moveDir + mod * (targetDir - moveDir);
    const Scalar stepLength = std::min(targetDistance, moveLength);
    points.push_back(bent * stepLength + base);
  }

  points.erase(points.begin());
  return points;
}

/// Index of the target whose center is nearest to `p`; ties go to the lowest id.
template<typename Scalar>
std::optional<std::size_t> nearest_target(std::span<const TargetRect<Scalar>> targets,
                                          const Vec2<Scalar>& p) {
  std::optional<std::size_t> best;
  Scalar bestDistance{0};
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Scalar d = (targets[i].center() - p).squaredNorm();
    if (!best || d < bestDistance ||
        (d == bestDistance && targets[i].id < targets[*best].id)) {
      best = i;
      bestDistance = d;
    }
  }
  return best;
}

/// Applies the configured assistance to one raw input delta.
///
///  - None: the raw delta.
///  - GravityMap: raw + assistGain * |raw| * influence(cursor). A zero raw
///    delta stays zero.
///  - Interpolation: last predicted point minus the cursor, aiming at the
///    nearest target's center. Without targets the raw delta passes through.
template<typename Scalar>
Vec2<Scalar> apply_assist(const AssistConfig<Scalar>& config,
                          const Vec2<Scalar>& cursor,
                          const Vec2<Scalar>& rawDelta,
                          std::span<const TargetRect<Scalar>> targets) {
  switch (config.mode) {
    case AssistMode::None:
      return rawDelta;
    case AssistMode::GravityMap: {
      const Vec2<Scalar> pull =
          gravity_map_influence(targets, cursor, config.influenceDistance);
      return rawDelta + (config.assistGain * rawDelta.norm()) * pull;
    }
    case AssistMode::Interpolation: {
      const auto nearest = nearest_target(targets, cursor);
      if (!nearest) return rawDelta;
      const auto points = interpolation_prediction(cursor, rawDelta, targets[*nearest].center(),
                                                   config.influence, config.predictionSteps);
      return points.back() - cursor;
    }
  }
  return rawDelta;
}

template<typename Scalar>
Vec2<Scalar> apply_assist(const AssistConfig<Scalar>& config,
                          const Vec2<Scalar>& cursor,
                          const Vec2<Scalar>& rawDelta,
                          const std::vector<TargetRect<Scalar>>& targets) {
  return apply_assist(config, cursor, rawDelta, std::span<const TargetRect<Scalar>>(targets));
}

}  // namespace assistlab
