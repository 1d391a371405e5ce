#pragma once

#include "assistlab/input/input_synth.hpp"
#include "assistlab/metrics/metrics.hpp"
#include "assistlab/metrics/report.hpp"
#include "assistlab/store/session_log.hpp"
#include "assistlab/task/task_engine.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace assistlab {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& detail)
      : std::runtime_error(field + ": " + detail), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// How a task's sub-tasks are generated.
struct TaskTemplate {
  std::string name;
  TaskMode mode{TaskMode::Locate};
  int subTasks{20};
  double targetSize{80};
  double availabilityWindow{5.0};     // Locate
  double dwellRequired{1.0};          // Select
  double selectTimeout{10.0};         // Select
  std::vector<double> speeds{200, 400, 600};  // Follow, cycled per sub-task
  double minLegLength{250};           // Follow
  double maxLegLength{450};           // Follow
  int legs{2};                        // Follow
  double minTargetSpacing{300};       // Locate/Select: distance between consecutive targets
};

struct NamedProfile {
  std::string name;   // key used in seeds and file names
  std::string label;  // row label in reports
  InputModel model;
};

struct NamedAssist {
  std::string name;
  AssistConfigd config;
};

struct ExperimentConfig {
  std::uint64_t masterSeed{0};
  int repetitions{1};
  Canvas canvas;
  int tickRate{60};
  std::string runLabel{"experiment"};
  std::vector<NamedProfile> profiles;
  std::vector<NamedAssist> assists;
  std::vector<TaskTemplate> tasks;
};

/// Parses and validates a config document; throws ConfigError naming the field.
ExperimentConfig parse_config(const nlohmann::json& document);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Seed for one stream: SplitMix64 folded over the master seed, the FNV-1a
/// hash of each label in turn, then the repetition index.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> labels,
                          std::uint64_t repetition);

TaskSpec generate_task(const TaskTemplate& tmpl, const Canvas& canvas, int tickRate,
                       const AssistConfigd& assist, std::uint64_t seed);

/// Where a synthetic participant aims during the current tick.
Vec2d aim_point(const TaskSpec& spec, const SessionState& state);

/// Runs one session to completion with a synthetic input model.
SessionLog run_headless(const TaskSpec& spec, const InputModel& model, const Vec2d& initialCursor,
                        const std::string& inputLabel, const std::string& taskLabel,
                        int repetition);

/// Runs a session from a fixed per-tick delta list (zero once exhausted).
SessionLog run_with_deltas(const TaskSpec& spec, const std::vector<Vec2d>& deltas,
                           const Vec2d& initialCursor);

/// Per-tick raw deltas implied by a log's CursorMoved events.
std::vector<Vec2d> deltas_from_events(const std::vector<SessionEvent>& events);

struct ReplayResult {
  std::vector<SessionEvent> events;
  std::vector<SubTaskRecord> records;
  bool eventsMatch{false};
  bool recordsMatch{false};
};

/// Re-simulates a log from its header and recorded raw input.
ReplayResult replay_log(const SessionLog& log);

struct CellResult {
  std::string profile;
  std::string assist;
  std::string task;
  std::vector<std::filesystem::path> logs;
  std::vector<SubTaskRecord> records;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  std::vector<ConditionResult> conditions;
  Report report;
};

std::string log_file_name(const std::string& profile, const std::string& assist,
                          const std::string& task, int repetition);

/// Runs every profile x assist x task cell for all repetitions, writing logs
/// under `outDir/logs` plus `report.csv` and `report.txt`. Output is staged
/// and moved into place only on success.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& outDir,
                                int jobs = 1, MetricsOptions options = {});

/// Rebuilds the report from the trailers of every log under `dir`.
ExperimentResult report_directory(const std::filesystem::path& dir, MetricsOptions options = {});

}  // namespace assistlab
