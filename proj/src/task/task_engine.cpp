#include "assistlab/task/task_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace assistlab {

namespace {

// Guards against 1.0 * 60 landing a hair above an integer before ceil.
constexpr double kTickEpsilon = 1e-9;

std::int64_t ceil_ticks(double seconds, int tickRate) {
  return static_cast<std::int64_t>(std::ceil(seconds * tickRate - kTickEpsilon));
}

std::int64_t round_ticks(double seconds, int tickRate) {
  return static_cast<std::int64_t>(std::llround(seconds * tickRate));
}

double seconds(std::int64_t ticks, int tickRate) {
  return static_cast<double>(ticks) / tickRate;
}

SessionEvent make_event(const SessionState& state, EventKind kind, const TargetRectd& target) {
  SessionEvent e;
  e.tick = state.tick;
  e.kind = kind;
  e.subTask = state.subTask;
  e.cursor = state.cursor;
  e.target = target;
  return e;
}

SubTaskRecord make_record(const TaskSpec& spec, const SessionState& state, bool success) {
  const auto& sub = spec.subTasks[state.subTask];
  const std::int64_t elapsed = state.tick - state.subTaskStartTick;
  SubTaskRecord r;
  r.mode = spec.mode;
  r.index = state.subTask;
  r.success = success;
  switch (spec.mode) {
    case TaskMode::Locate:
      if (success) r.reachTime = seconds(elapsed, spec.tickRate);
      break;
    case TaskMode::Select:
      r.cumulativeOverlapTime = seconds(state.cumulativeOverlapTicks, spec.tickRate);
      r.dwellRequired = *sub.dwellRequired;
      break;
    case TaskMode::Follow:
      r.overlapTime = seconds(state.cumulativeOverlapTicks, spec.tickRate);
      r.flyTime = seconds(elapsed, spec.tickRate);
      break;
  }
  return r;
}

void finish_sub_task(SessionState& state, const TaskSpec& spec, bool success,
                     const TargetRectd& target, std::vector<SessionEvent>& events) {
  state.records.push_back(make_record(spec, state, success));
  events.push_back(make_event(
      state, success ? EventKind::SubTaskSucceeded : EventKind::SubTaskFailed, target));

  if (state.subTask + 1 == spec.subTasks.size()) {
    state.ended = true;
    events.push_back(make_event(state, EventKind::SessionEnded, target));
    return;
  }

  state.subTask += 1;
  state.subTaskStartTick = state.tick;
  state.overlapping = false;
  state.continuousOverlapTicks = 0;
  state.cumulativeOverlapTicks = 0;
  events.push_back(make_event(state, EventKind::SubTaskStarted, target_at(spec, state.subTask, 0)));
}

}  // namespace

std::string_view to_string(TaskMode mode) {
  switch (mode) {
    case TaskMode::Locate: return "locate";
    case TaskMode::Select: return "select";
    case TaskMode::Follow: return "follow";
  }
  return "locate";
}

std::optional<TaskMode> parse_task_mode(std::string_view name) {
  if (name == "locate") return TaskMode::Locate;
  if (name == "select") return TaskMode::Select;
  if (name == "follow") return TaskMode::Follow;
  return std::nullopt;
}

namespace {
constexpr std::array<std::string_view, 7> kEventNames = {
    "SubTaskStarted", "CursorMoved",   "OverlapEntered", "OverlapExited",
    "SubTaskSucceeded", "SubTaskFailed", "SessionEnded",
};
}

std::string_view to_string(EventKind kind) {
  return kEventNames[static_cast<std::size_t>(kind)];
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i)
    if (kEventNames[i] == name) return static_cast<EventKind>(i);
  return std::nullopt;
}

void TaskSpec::validate() const {
  if (subTasks.empty()) throw InvalidSpec("task spec has no sub-tasks");
  if (tickRate <= 0) throw InvalidSpec("tickRate must be > 0");
  if (!(canvas.width > 0 && canvas.height > 0)) throw InvalidSpec("canvas must have positive size");
  if (mode == TaskMode::Select && !(selectTimeout > 0)) throw InvalidSpec("selectTimeout must be > 0");
  try {
    assist.validate();
  } catch (const std::invalid_argument& e) {
    throw InvalidSpec(e.what());
  }

  for (std::size_t i = 0; i < subTasks.size(); ++i) {
    const auto& s = subTasks[i];
    const std::string where = "subTasks[" + std::to_string(i) + "]";
    if (!s.target.valid()) throw InvalidSpec(where + ".target must have positive size");

    const bool locate = s.availabilityWindow.has_value();
    const bool select = s.dwellRequired.has_value();
    const bool follow = !s.path.empty() || s.speed.has_value();
    const bool expected[] = {mode == TaskMode::Locate, mode == TaskMode::Select,
                             mode == TaskMode::Follow};
    if (locate != expected[0] || select != expected[1] || follow != expected[2])
      throw InvalidSpec(where + " must set exactly the fields of mode " +
                        std::string(to_string(mode)));

    switch (mode) {
      case TaskMode::Locate:
        if (!(*s.availabilityWindow > 0)) throw InvalidSpec(where + ".availabilityWindow must be > 0");
        break;
      case TaskMode::Select:
        if (!(*s.dwellRequired > 0)) throw InvalidSpec(where + ".dwellRequired must be > 0");
        break;
      case TaskMode::Follow:
        if (s.path.size() < 2) throw InvalidSpec(where + ".path needs at least 2 waypoints");
        if (!s.speed || !(*s.speed > 0)) throw InvalidSpec(where + ".speed must be > 0");
        for (const auto& w : s.path)
          if (!w.allFinite()) throw InvalidSpec(where + ".path has a non-finite waypoint");
        if (!(path_length(s.path) > 0)) throw InvalidSpec(where + ".path has zero length");
        break;
    }
  }
}

double path_length(std::span<const Vec2d> path) {
  double total = 0;
  for (std::size_t i = 1; i < path.size(); ++i) total += (path[i] - path[i - 1]).norm();
  return total;
}

Vec2d path_position(std::span<const Vec2d> path, double distanceAlong) {
  if (path.empty()) return Vec2d::Zero();
  double remaining = std::max(distanceAlong, 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Vec2d leg = path[i] - path[i - 1];
    const double length = leg.norm();
    if (remaining <= length) {
      if (length == 0) return path[i - 1];
      return path[i - 1] + leg * (remaining / length);
    }
    remaining -= length;
  }
  return path.back();
}

std::int64_t locate_window_ticks(const TaskSpec& spec, std::size_t subTask) {
  return round_ticks(*spec.subTasks[subTask].availabilityWindow, spec.tickRate);
}

std::int64_t select_dwell_ticks(const TaskSpec& spec, std::size_t subTask) {
  return std::max<std::int64_t>(1, ceil_ticks(*spec.subTasks[subTask].dwellRequired, spec.tickRate));
}

std::int64_t select_timeout_ticks(const TaskSpec& spec) {
  return round_ticks(spec.selectTimeout, spec.tickRate);
}

std::int64_t follow_fly_ticks(const TaskSpec& spec, std::size_t subTask) {
  const auto& sub = spec.subTasks[subTask];
  return std::max<std::int64_t>(1, ceil_ticks(path_length(sub.path) / *sub.speed, spec.tickRate));
}

TargetRectd target_at(const TaskSpec& spec, std::size_t subTask, std::int64_t elapsedTicks) {
  const auto& sub = spec.subTasks[subTask];
  if (spec.mode != TaskMode::Follow) return sub.target;
  const double travelled = seconds(elapsedTicks, spec.tickRate) * *sub.speed;
  return sub.target.centered_at(path_position(sub.path, travelled));
}

TargetRectd current_target(const TaskSpec& spec, const SessionState& state) {
  return target_at(spec, state.subTask, state.tick - state.subTaskStartTick);
}

SessionState start_session(const TaskSpec& spec, const Vec2d& initialCursor,
                           std::vector<SessionEvent>& events) {
  spec.validate();
  if (!initialCursor.allFinite()) throw InvalidSpec("initial cursor must be finite");
  SessionState state;
  state.cursor = spec.canvas.clamp(initialCursor);
  events.push_back(make_event(state, EventKind::SubTaskStarted, target_at(spec, 0, 0)));
  return state;
}

void step(SessionState& state, const TaskSpec& spec, const Vec2d& rawDelta,
          std::vector<SessionEvent>& events) {
  if (state.ended) throw SessionAlreadyEnded();
  if (!rawDelta.allFinite()) throw std::invalid_argument("raw delta must be finite");

  state.tick += 1;
  const std::int64_t elapsed = state.tick - state.subTaskStartTick;

  // The target moves first; assistance and overlap see its new position.
  const TargetRectd target = target_at(spec, state.subTask, elapsed);
  const std::array<TargetRectd, 1> visible{target};
  const Vec2d assisted = apply_assist(spec.assist, state.cursor, rawDelta,
                                      std::span<const TargetRectd>(visible));
  state.cursor = spec.canvas.clamp(state.cursor + assisted);

  if (!rawDelta.isZero(0)) {
    SessionEvent moved = make_event(state, EventKind::CursorMoved, target);
    moved.raw = rawDelta;
    events.push_back(moved);
  }

  const bool overlap = target.contains(state.cursor);
  if (overlap != state.overlapping) {
    state.overlapping = overlap;
    events.push_back(make_event(
        state, overlap ? EventKind::OverlapEntered : EventKind::OverlapExited, target));
  }
  if (overlap) {
    state.continuousOverlapTicks += 1;
    state.cumulativeOverlapTicks += 1;
  } else {
    state.continuousOverlapTicks = 0;
  }

  switch (spec.mode) {
    case TaskMode::Locate:
      if (overlap)
        finish_sub_task(state, spec, true, target, events);
      else if (elapsed > locate_window_ticks(spec, state.subTask))
        finish_sub_task(state, spec, false, target, events);
      break;
    case TaskMode::Select:
      if (state.continuousOverlapTicks >= select_dwell_ticks(spec, state.subTask))
        finish_sub_task(state, spec, true, target, events);
      else if (elapsed > select_timeout_ticks(spec))
        finish_sub_task(state, spec, false, target, events);
      break;
    case TaskMode::Follow:
      if (elapsed >= follow_fly_ticks(spec, state.subTask))
        finish_sub_task(state, spec, state.cumulativeOverlapTicks > 0, target, events);
      break;
  }
}

}  // namespace assistlab
