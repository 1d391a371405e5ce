#pragma once

#include "assistlab/task/task_mode.hpp"

#include <cstddef>
#include <optional>

namespace assistlab {

// Outcome of one sub-task. Times are in seconds, derived from tick counts.
struct SubTaskRecord {
  TaskMode mode{TaskMode::Locate};
  std::size_t index{0};
  bool success{false};

  // Locate, successes only: first overlap minus appearance.
  std::optional<double> reachTime;
  // Select: cumulative overlap over the whole sub-task, and the dwell target.
  std::optional<double> cumulativeOverlapTime;
  std::optional<double> dwellRequired;
  // Follow.
  std::optional<double> overlapTime;
  std::optional<double> flyTime;

  // Mode-specific fields present iff applicable; times non-negative.
  bool consistent() const;

  bool operator==(const SubTaskRecord&) const = default;
};

}  // namespace assistlab
