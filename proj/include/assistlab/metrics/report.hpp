#pragma once

#include "assistlab/core/assist.hpp"
#include "assistlab/metrics/metrics.hpp"

#include <string>
#include <vector>

namespace assistlab {

// One measured condition: an input method, optionally assisted, on one task.
struct ConditionResult {
  std::string task;   // table key, e.g. "locate" or "follow-400"
  std::string input;  // e.g. "Head"
  AssistMode assist{AssistMode::None};
  ModeSummary summary;
};

struct ReportRow {
  std::string section;  // "No AI Support", "AI Support" or "" for the average row
  std::string label;
  std::string success;
  std::string time;
  std::string n;          // blank on the average row
  std::string successes;  // blank on the average row
};

struct ReportTable {
  std::string task;
  TaskMode mode{TaskMode::Locate};
  std::string successHeader;
  std::string timeHeader;
  std::vector<ReportRow> rows;  // No-AI rows, AI rows, then "Overall Average"
};

struct Report {
  std::string runLabel;
  std::vector<ReportTable> tables;
};

std::string assist_label(AssistMode mode);  // "", "Interpolation", "Gravity-Map"
std::string condition_label(const std::string& input, AssistMode assist);

std::string format_percent(double value);
// Locate reach times use two decimals, Select extra times three.
std::string format_seconds(double value, TaskMode mode);
std::string format_time_metric(const ModeSummary& summary);

/// Groups results into one table per task, keeping first-seen order.
Report summarize(const std::string& runLabel, const std::vector<ConditionResult>& results);

// RFC 4180 CSV: run,task,section,input,success,time,n,successes
std::string to_csv(const Report& report);
std::string to_text(const Report& report);

}  // namespace assistlab
