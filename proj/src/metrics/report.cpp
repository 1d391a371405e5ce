#include "assistlab/metrics/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

namespace assistlab {

namespace {

std::string printf_string(const char* format, double value) {
  std::array<char, 64> buffer{};
  std::snprintf(buffer.data(), buffer.size(), format, value);
  return buffer.data();
}

const char* success_header(TaskMode mode) {
  switch (mode) {
    case TaskMode::Locate: return "Target Reached %";
    case TaskMode::Select: return "Target Selected %";
    case TaskMode::Follow: return "Moving Target Touched %";
  }
  return "";
}

const char* time_header(TaskMode mode) {
  switch (mode) {
    case TaskMode::Locate: return "Avg. Reach Time";
    case TaskMode::Select: return "Avg. Extra Time Required";
    case TaskMode::Follow: return "Avg. Follow %";
  }
  return "";
}

std::string format_metric(std::optional<double> value, TaskMode mode) {
  if (!value) return "-";
  return mode == TaskMode::Follow ? format_percent(*value) : format_seconds(*value, mode);
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

constexpr const char* kNoAi = "No AI Support";
constexpr const char* kAi = "AI Support";

}  // namespace

std::string assist_label(AssistMode mode) {
  switch (mode) {
    case AssistMode::None: return "";
    case AssistMode::Interpolation: return "Interpolation";
    case AssistMode::GravityMap: return "Gravity-Map";
  }
  return "";
}

std::string condition_label(const std::string& input, AssistMode assist) {
  if (assist == AssistMode::None) return input;
  return input + " - " + assist_label(assist);
}

std::string format_percent(double value) {
  if (value == 100.0) return "100%";
  return printf_string("%.1f%%", value);
}

std::string format_seconds(double value, TaskMode mode) {
  return printf_string(mode == TaskMode::Select ? "%.3fs" : "%.2fs", value);
}

std::string format_time_metric(const ModeSummary& summary) {
  return format_metric(summary.timeMetric, summary.mode);
}

Report summarize(const std::string& runLabel, const std::vector<ConditionResult>& results) {
  Report report;
  report.runLabel = runLabel;

  std::vector<std::string> order;
  for (const auto& r : results)
    if (std::find(order.begin(), order.end(), r.task) == order.end()) order.push_back(r.task);

  for (const auto& task : order) {
    std::vector<const ConditionResult*> members;
    for (const auto& r : results)
      if (r.task == task) members.push_back(&r);

    ReportTable table;
    table.task = task;
    table.mode = members.front()->summary.mode;
    table.successHeader = success_header(table.mode);
    table.timeHeader = time_header(table.mode);

    double successSum = 0;
    double timeSum = 0;
    std::size_t timeCount = 0;
    for (bool assisted : {false, true}) {
      for (const auto* r : members) {
        if ((r->assist != AssistMode::None) != assisted) continue;
        table.rows.push_back({assisted ? kAi : kNoAi, condition_label(r->input, r->assist),
                              format_percent(r->summary.successPct),
                              format_time_metric(r->summary), std::to_string(r->summary.n),
                              std::to_string(r->summary.successes)});
        successSum += r->summary.successPct;
        if (r->summary.timeMetric) {
          timeSum += *r->summary.timeMetric;
          ++timeCount;
        }
      }
    }

    const double successAvg = successSum / static_cast<double>(members.size());
    const std::optional<double> timeAvg =
        timeCount ? std::optional<double>(timeSum / static_cast<double>(timeCount)) : std::nullopt;
    table.rows.push_back(
        {"", "Overall Average", format_percent(successAvg), format_metric(timeAvg, table.mode), "", ""});
    report.tables.push_back(std::move(table));
  }
  return report;
}

std::string to_csv(const Report& report) {
  std::ostringstream out;
  out << "run,task,section,input,success,time,n,successes\r\n";
  for (const auto& table : report.tables) {
    for (const auto& row : table.rows) {
      out << csv_field(report.runLabel) << ',' << csv_field(table.task) << ','
          << csv_field(row.section) << ',' << csv_field(row.label) << ','
          << csv_field(row.success) << ',' << csv_field(row.time) << ',' << row.n << ','
          << row.successes << "\r\n";
    }
  }
  return out.str();
}

std::string to_text(const Report& report) {
  std::ostringstream out;
  out << report.runLabel << '\n';
  if (report.tables.empty()) {
    out << "\nInput | Success % | Time\n";
    return out.str();
  }

  for (const auto& table : report.tables) {
    std::size_t sectionWidth = std::string(kNoAi).size();
    std::size_t labelWidth = std::string("Input").size();
    std::size_t successWidth = table.successHeader.size();
    std::size_t timeWidth = table.timeHeader.size();
    for (const auto& row : table.rows) {
      labelWidth = std::max(labelWidth, row.label.size());
      successWidth = std::max(successWidth, row.success.size());
      timeWidth = std::max(timeWidth, row.time.size());
    }

    auto line = [&](const std::string& section, const std::string& label,
                    const std::string& success, const std::string& time) {
      out << section << std::string(sectionWidth - section.size(), ' ') << " | "
          << std::string(labelWidth - label.size(), ' ') << label << " | " << success
          << std::string(successWidth - success.size(), ' ') << " | " << time << '\n';
    };
    auto rule = [&] {
      out << std::string(sectionWidth + labelWidth + successWidth + timeWidth + 9, '-') << '\n';
    };

    out << '\n' << "Task: " << table.task << " (" << to_string(table.mode) << ")\n";
    rule();
    line("", "Input", table.successHeader, table.timeHeader);
    rule();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const auto& row = table.rows[i];
      if (i > 0 && row.section != table.rows[i - 1].section) rule();
      line(row.section, row.label, row.success, row.time);
    }
    rule();
  }
  return out.str();
}

}  // namespace assistlab
