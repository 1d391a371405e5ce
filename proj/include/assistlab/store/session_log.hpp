#pragma once

#include "assistlab/input/input_synth.hpp"
#include "assistlab/metrics/record.hpp"
#include "assistlab/task/task_engine.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace assistlab {

inline constexpr int kSessionSchemaVersion = 1;
inline constexpr const char* kSessionLogExtension = ".session.jsonl";

class SchemaVersionUnsupported : public std::runtime_error {
 public:
  explicit SchemaVersionUnsupported(int version)
      : std::runtime_error("unsupported session schema version " + std::to_string(version)),
        version_(version) {}
  int version() const { return version_; }

 private:
  int version_;
};

class CorruptLine : public std::runtime_error {
 public:
  CorruptLine(std::size_t line, const std::string& detail)
      : std::runtime_error("line " + std::to_string(line) + ": " + detail), line_(line) {}
  // 1-based.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct SessionHeader {
  int schema{kSessionSchemaVersion};
  std::string source{"headless"};  // "headless" or "live"
  std::string inputLabel;
  std::string taskLabel;
  int repetition{0};
  TaskSpec spec;  // carries the assist config and tick rate
  std::optional<InputModel> input;
  Vec2d initialCursor{Vec2d::Zero()};

  bool operator==(const SessionHeader&) const = default;
};

struct SessionLog {
  SessionHeader header;
  std::vector<SessionEvent> events;
  std::vector<SubTaskRecord> records;

  bool operator==(const SessionLog&) const = default;
};

// JSON mappings shared by the log, the experiment config and the service.
nlohmann::ordered_json to_json(const Vec2d& v);
Vec2d vec2_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const TargetRectd& r);
TargetRectd target_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const AssistConfigd& c);
AssistConfigd assist_from_json(const nlohmann::json& j, AssistConfigd defaults = {});
nlohmann::ordered_json to_json(const TaskSpec& spec);
TaskSpec task_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const InputModel& m);
InputModel input_model_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SessionEvent& e);
SessionEvent event_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SubTaskRecord& r);
SubTaskRecord record_from_json(const nlohmann::json& j);

/// Serializes the log: header line, one line per event, trailer line.
/// Returns the number of bytes written.
std::size_t write_log(const SessionLog& log, std::ostream& out);
std::size_t write_log(const SessionLog& log, const std::filesystem::path& path);
std::string log_to_string(const SessionLog& log);

/// Throws SchemaVersionUnsupported or CorruptLine.
SessionLog read_log(std::istream& in);
SessionLog read_log(const std::filesystem::path& path);

}  // namespace assistlab
