#pragma once

#include "assistlab/metrics/metrics.hpp"
#include "assistlab/store/session_log.hpp"
#include "assistlab/task/task_engine.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace assistlab {

inline constexpr const char* kProtocolVersion = "v1";

struct CatalogTask {
  std::string id;
  TaskSpec spec;  // assist is chosen per session
};

struct TrialCatalog {
  std::vector<CatalogTask> tasks;
  std::vector<std::string> profiles;
  AssistConfigd assistDefaults;

  const CatalogTask* find(std::string_view id) const;
};

/// Locate, Select and Follow tasks generated from a fixed seed.
TrialCatalog default_catalog();

// Persists a finished live session and returns its log id.
using LogSink = std::function<std::string(const SessionLog&)>;

/// Writes `<dir>/<id>.session.jsonl` with ids "live-0001", "live-0002", ...
/// skipping ids whose files already exist. Safe to share across connections.
LogSink directory_log_sink(const std::filesystem::path& dir);

// Wall-clock input is turned into engine ticks by accumulating each message's
// dt and running floor(accumulated / tickDt) ticks. The message's delta goes to
// the first of those ticks; if none run, it is carried to the next tick that does.
class TickQuantizer {
 public:
  explicit TickQuantizer(int tickRate) : tickRate_(tickRate) {}

  /// Number of ticks to run for a message that covers `dt` seconds.
  std::int64_t advance(double dt);

 private:
  int tickRate_;
  double accumulatedTicks_{0};
};

/// One WebSocket connection's protocol state. Messages are JSON text; every
/// call returns the replies to send, in order. See docs/protocol.md.
class TrialConnection {
 public:
  TrialConnection(std::shared_ptr<const TrialCatalog> catalog, LogSink sink);

  std::vector<std::string> handle_message(std::string_view text);

  /// Connection dropped: any running session is discarded unsaved.
  void on_disconnect();

  bool session_active() const { return session_.has_value(); }
  // Events of the running session so far (empty when idle).
  const std::vector<SessionEvent>& session_events() const;

 private:
  struct Session {
    std::string taskId;
    TaskSpec spec;
    SessionState state;
    std::vector<SessionEvent> events;
    std::size_t eventsSent{0};
    std::int64_t lastSeq{-1};
    TickQuantizer quantizer;
    Vec2d pendingDelta{Vec2d::Zero()};
    Vec2d initialCursor{Vec2d::Zero()};
  };

  nlohmann::ordered_json on_hello(const nlohmann::json& message);
  std::vector<std::string> on_start(const nlohmann::json& message);
  std::vector<std::string> on_input(const nlohmann::json& message);
  nlohmann::ordered_json state_message();

  std::shared_ptr<const TrialCatalog> catalog_;
  LogSink sink_;
  bool greeted_{false};
  std::optional<Session> session_;
};

nlohmann::ordered_json to_json(const ModeSummary& summary);
ModeSummary summary_from_json(const nlohmann::json& j);

}  // namespace assistlab
