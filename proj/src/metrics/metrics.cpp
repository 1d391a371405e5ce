#include "assistlab/metrics/metrics.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

namespace assistlab {

bool SubTaskRecord::consistent() const {
  auto nonNegative = [](const std::optional<double>& v) { return !v || *v >= 0; };
  if (!nonNegative(reachTime) || !nonNegative(cumulativeOverlapTime) ||
      !nonNegative(dwellRequired) || !nonNegative(overlapTime) || !nonNegative(flyTime))
    return false;

  const bool selectFields = cumulativeOverlapTime.has_value() && dwellRequired.has_value();
  const bool followFields = overlapTime.has_value() && flyTime.has_value();
  switch (mode) {
    case TaskMode::Locate:
      return reachTime.has_value() == success && !cumulativeOverlapTime && !dwellRequired &&
             !overlapTime && !flyTime;
    case TaskMode::Select:
      return selectFields && !reachTime && !overlapTime && !flyTime;
    case TaskMode::Follow:
      return followFields && *overlapTime <= *flyTime && !reachTime && !cumulativeOverlapTime &&
             !dwellRequired;
  }
  return false;
}

namespace {

using Term = std::function<double(const SubTaskRecord&)>;

ModeSummary summarize_mode(TaskMode mode, std::span<const SubTaskRecord> records,
                           MetricsOptions options, const Term& term) {
  if (records.empty()) throw EmptyRecordSet();

  std::vector<double> terms;
  for (const auto& r : records) {
    if (r.mode != mode)
      throw std::invalid_argument("record " + std::to_string(r.index) + " is not a " +
                                  std::string(to_string(mode)) + " record");
    if (!r.consistent())
      throw std::invalid_argument("record " + std::to_string(r.index) + " has inconsistent fields");
    if (r.success) terms.push_back(term(r));
  }

  ModeSummary s;
  s.mode = mode;
  s.n = records.size();
  s.successes = terms.size();
  s.successPct = 100.0 * static_cast<double>(s.successes) / static_cast<double>(s.n);
  if (terms.empty()) return s;

  // Summing in sorted order makes the result independent of record order.
  std::sort(terms.begin(), terms.end());
  double sum = 0;
  for (double t : terms) sum += t;
  double mean = sum / static_cast<double>(terms.size());
  if (options.paperLiteralAverages)
    mean = mean * static_cast<double>(s.successes) / static_cast<double>(s.n);
  s.timeMetric = mean;
  return s;
}

}  // namespace

ModeSummary compute_locate(std::span<const SubTaskRecord> records, MetricsOptions options) {
  return summarize_mode(TaskMode::Locate, records, options,
                        [](const SubTaskRecord& r) { return *r.reachTime; });
}

ModeSummary compute_select(std::span<const SubTaskRecord> records, MetricsOptions options) {
  return summarize_mode(TaskMode::Select, records, options, [](const SubTaskRecord& r) {
    return *r.cumulativeOverlapTime - *r.dwellRequired;
  });
}

ModeSummary compute_follow(std::span<const SubTaskRecord> records, MetricsOptions options) {
  return summarize_mode(TaskMode::Follow, records, options, [](const SubTaskRecord& r) {
    return 100.0 * *r.overlapTime / *r.flyTime;
  });
}

ModeSummary compute_summary(std::span<const SubTaskRecord> records, MetricsOptions options) {
  if (records.empty()) throw EmptyRecordSet();
  switch (records.front().mode) {
    case TaskMode::Locate: return compute_locate(records, options);
    case TaskMode::Select: return compute_select(records, options);
    case TaskMode::Follow: return compute_follow(records, options);
  }
  throw EmptyRecordSet();
}

}  // namespace assistlab
