#pragma once

#include "assistlab/core/assist.hpp"
#include "assistlab/core/types.hpp"
#include "assistlab/metrics/record.hpp"
#include "assistlab/task/task_mode.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace assistlab {

class InvalidSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SessionAlreadyEnded : public std::logic_error {
 public:
  SessionAlreadyEnded() : std::logic_error("session already ended") {}
};

struct Canvas {
  double width{1920};
  double height{1080};

  Vec2d clamp(const Vec2d& p) const {
    return {std::clamp(p.x(), 0.0, width), std::clamp(p.y(), 0.0, height)};
  }
  Vec2d center() const { return {width / 2, height / 2}; }
  bool operator==(const Canvas&) const = default;
};

// One target presentation. Only the fields of the owning task's mode are set.
// For Follow, `target` supplies the size and id; its position comes from the path.
struct SubTaskSpec {
  TargetRectd target;
  std::optional<double> availabilityWindow;  // Locate, seconds
  std::optional<double> dwellRequired;       // Select, seconds
  std::vector<Vec2d> path;                   // Follow waypoints
  std::optional<double> speed;               // Follow, px/s

  bool operator==(const SubTaskSpec&) const = default;
};

struct TaskSpec {
  std::string id;
  TaskMode mode{TaskMode::Locate};
  std::vector<SubTaskSpec> subTasks;
  Canvas canvas;
  int tickRate{60};
  double selectTimeout{10.0};
  AssistConfigd assist;

  double dt() const { return 1.0 / tickRate; }

  /// Throws InvalidSpec naming the first violated invariant.
  void validate() const;

  bool operator==(const TaskSpec&) const = default;
};

enum class EventKind {
  SubTaskStarted,
  CursorMoved,
  OverlapEntered,
  OverlapExited,
  SubTaskSucceeded,
  SubTaskFailed,
  SessionEnded,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

// `raw` is the unassisted input delta and is only meaningful for CursorMoved.
struct SessionEvent {
  std::int64_t tick{0};
  EventKind kind{EventKind::SubTaskStarted};
  std::size_t subTask{0};
  Vec2d cursor{Vec2d::Zero()};
  TargetRectd target;
  Vec2d raw{Vec2d::Zero()};

  bool operator==(const SessionEvent&) const = default;
};

struct SessionState {
  Vec2d cursor{Vec2d::Zero()};
  std::size_t subTask{0};
  std::int64_t tick{0};
  // Tick at which the current sub-task appeared; its first active tick is the next one.
  std::int64_t subTaskStartTick{0};
  bool overlapping{false};
  std::int64_t continuousOverlapTicks{0};
  std::int64_t cumulativeOverlapTicks{0};
  bool ended{false};
  std::vector<SubTaskRecord> records;
};

/// Arc-length position along a polyline; clamps to the last waypoint.
Vec2d path_position(std::span<const Vec2d> path, double distanceAlong);
double path_length(std::span<const Vec2d> path);

// Tick-count limits derived from a sub-task's seconds-valued fields.
std::int64_t locate_window_ticks(const TaskSpec& spec, std::size_t subTask);
std::int64_t select_dwell_ticks(const TaskSpec& spec, std::size_t subTask);
std::int64_t select_timeout_ticks(const TaskSpec& spec);
std::int64_t follow_fly_ticks(const TaskSpec& spec, std::size_t subTask);

/// Target rectangle of `subTask` after `elapsedTicks` ticks of that sub-task.
TargetRectd target_at(const TaskSpec& spec, std::size_t subTask, std::int64_t elapsedTicks);

/// Target of the active sub-task at the state's current tick.
TargetRectd current_target(const TaskSpec& spec, const SessionState& state);

/// Validates the spec, clamps the cursor and emits SubTaskStarted at tick 0.
SessionState start_session(const TaskSpec& spec, const Vec2d& initialCursor,
                           std::vector<SessionEvent>& events);

/// Advances the session by one tick, appending the tick's events.
void step(SessionState& state, const TaskSpec& spec, const Vec2d& rawDelta,
          std::vector<SessionEvent>& events);

}  // namespace assistlab
