#pragma once

#include "assistlab/metrics/record.hpp"
#include "assistlab/task/task_mode.hpp"

#include <optional>
#include <span>
#include <stdexcept>

namespace assistlab {

class EmptyRecordSet : public std::invalid_argument {
 public:
  EmptyRecordSet() : std::invalid_argument("metrics need at least one sub-task record") {}
};

struct MetricsOptions {
  // Divide sums over successful sub-tasks by n (all sub-tasks) instead of |S'|.
  bool paperLiteralAverages{false};
};

// One table row's worth of numbers.
//  Locate: timeMetric = average reach time (s)
//  Select: timeMetric = average extra time beyond the dwell requirement (s)
//  Follow: timeMetric = average overlap / fly-time ratio (percent)
// timeMetric is absent when no sub-task succeeded.
struct ModeSummary {
  TaskMode mode{TaskMode::Locate};
  double successPct{0};
  std::optional<double> timeMetric;
  std::size_t n{0};
  std::size_t successes{0};

  bool operator==(const ModeSummary&) const = default;
};

ModeSummary compute_locate(std::span<const SubTaskRecord> records, MetricsOptions options = {});
ModeSummary compute_select(std::span<const SubTaskRecord> records, MetricsOptions options = {});
ModeSummary compute_follow(std::span<const SubTaskRecord> records, MetricsOptions options = {});

/// Dispatches on the mode of the first record.
ModeSummary compute_summary(std::span<const SubTaskRecord> records, MetricsOptions options = {});

}  // namespace assistlab
