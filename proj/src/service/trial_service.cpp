#include "assistlab/service/trial_service.hpp"

#include "assistlab/experiment/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>

namespace assistlab {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kCatalogSeed = 0x7269616c5f763101ULL;

ordered_json error_message(std::string_view code, const std::string& detail) {
  ordered_json j;
  j["type"] = "error";
  j["code"] = code;
  j["detail"] = detail;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(); }

}  // namespace

const CatalogTask* TrialCatalog::find(std::string_view id) const {
  for (const auto& t : tasks)
    if (t.id == id) return &t;
  return nullptr;
}

TrialCatalog default_catalog() {
  TrialCatalog catalog;
  const Canvas canvas;
  TaskTemplate locate{.name = "locate", .mode = TaskMode::Locate, .subTasks = 5};
  TaskTemplate select{.name = "select", .mode = TaskMode::Select, .subTasks = 5};
  TaskTemplate follow{.name = "follow", .mode = TaskMode::Follow, .subTasks = 3};
  for (const auto* tmpl : {&locate, &select, &follow}) {
    catalog.tasks.push_back(
        {tmpl->name, generate_task(*tmpl, canvas, 60, AssistConfigd{},
                                   derive_seed(kCatalogSeed, {"catalog", tmpl->name}, 0))});
  }
  catalog.profiles = {"mouse-like", "head-like", "image-like"};
  return catalog;
}

LogSink directory_log_sink(const std::filesystem::path& dir) {
  auto counter = std::make_shared<std::atomic<unsigned>>(0);
  auto mutex = std::make_shared<std::mutex>();
  return [dir, counter, mutex](const SessionLog& log) {
    std::lock_guard lock(*mutex);
    std::filesystem::create_directories(dir);
    for (;;) {
      char id[32];
      std::snprintf(id, sizeof id, "live-%04u", ++*counter);
      const auto path = dir / (std::string(id) + kSessionLogExtension);
      if (std::filesystem::exists(path)) continue;
      write_log(log, path);
      return std::string(id);
    }
  };
}

std::int64_t TickQuantizer::advance(double dt) {
  accumulatedTicks_ += dt * tickRate_;
  const auto ticks = static_cast<std::int64_t>(std::floor(accumulatedTicks_ + 1e-9));
  accumulatedTicks_ = std::max(0.0, accumulatedTicks_ - static_cast<double>(ticks));
  return ticks;
}

ordered_json to_json(const ModeSummary& s) {
  ordered_json j;
  j["mode"] = std::string(to_string(s.mode));
  j["successPct"] = s.successPct;
  j["timeMetric"] = s.timeMetric ? ordered_json(*s.timeMetric) : ordered_json(nullptr);
  j["n"] = s.n;
  j["successes"] = s.successes;
  return j;
}

ModeSummary summary_from_json(const json& j) {
  ModeSummary s;
  s.mode = parse_task_mode(j.at("mode").get<std::string>()).value();
  s.successPct = j.at("successPct").get<double>();
  if (!j.at("timeMetric").is_null()) s.timeMetric = j.at("timeMetric").get<double>();
  s.n = j.at("n").get<std::size_t>();
  s.successes = j.at("successes").get<std::size_t>();
  return s;
}

TrialConnection::TrialConnection(std::shared_ptr<const TrialCatalog> catalog, LogSink sink)
    : catalog_(std::move(catalog)), sink_(std::move(sink)) {}

const std::vector<SessionEvent>& TrialConnection::session_events() const {
  static const std::vector<SessionEvent> kNone;
  return session_ ? session_->events : kNone;
}

void TrialConnection::on_disconnect() { session_.reset(); }

std::vector<std::string> TrialConnection::handle_message(std::string_view text) {
  json message;
  try {
    message = json::parse(text);
  } catch (const json::parse_error&) {
    return {dump(error_message("bad-message", "message is not valid JSON"))};
  }
  if (!message.is_object() || !message.contains("type") || !message.at("type").is_string())
    return {dump(error_message("bad-message", "message needs a string \"type\""))};

  const auto type = message.at("type").get<std::string>();
  try {
    if (type == "hello") return {dump(on_hello(message))};
    if (!greeted_) return {dump(error_message("not-ready", "send hello first"))};
    if (type == "start") return on_start(message);
    if (type == "input") return on_input(message);
  } catch (const json::exception& e) {
    return {dump(error_message("bad-message", e.what()))};
  }
  return {dump(error_message("bad-message", "unknown message type \"" + type + "\""))};
}

ordered_json TrialConnection::on_hello(const json& message) {
  const auto version = message.value("protocolVersion", std::string{});
  if (version != kProtocolVersion)
    return error_message("version-mismatch", "server speaks " + std::string(kProtocolVersion) +
                                                 ", client sent \"" + version + "\"");
  greeted_ = true;

  ordered_json reply;
  reply["type"] = "catalog";
  reply["protocolVersion"] = kProtocolVersion;
  ordered_json tasks = ordered_json::array();
  for (const auto& t : catalog_->tasks) {
    ordered_json entry;
    entry["id"] = t.id;
    entry["mode"] = std::string(to_string(t.spec.mode));
    entry["subTasks"] = t.spec.subTasks.size();
    entry["spec"] = to_json(t.spec);
    tasks.push_back(std::move(entry));
  }
  reply["taskSpecs"] = std::move(tasks);
  reply["assistModes"] = ordered_json::array({"none", "interpolation", "gravity"});
  reply["assistDefaults"] = to_json(catalog_->assistDefaults);
  reply["profiles"] = catalog_->profiles;
  return reply;
}

std::vector<std::string> TrialConnection::on_start(const json& message) {
  if (session_) return {dump(error_message("session-active", "a session is already running"))};

  const auto taskId = message.value("taskSpecId", std::string{});
  const CatalogTask* task = catalog_->find(taskId);
  if (!task) return {dump(error_message("unknown-task", "no task spec \"" + taskId + "\""))};

  TaskSpec spec = task->spec;
  try {
    spec.assist = assist_from_json(message.value("assistConfig", json::object()),
                                   catalog_->assistDefaults);
    spec.assist.validate();
  } catch (const std::invalid_argument& e) {
    return {dump(error_message("bad-assist", e.what()))};
  }

  Session s{taskId, spec, {}, {}, 0, -1, TickQuantizer(spec.tickRate), Vec2d::Zero(),
            spec.canvas.center()};
  s.state = start_session(s.spec, s.initialCursor, s.events);
  session_ = std::move(s);
  return {dump(state_message())};
}

std::vector<std::string> TrialConnection::on_input(const json& message) {
  if (!session_) return {dump(error_message("no-session", "no session is running"))};
  auto& s = *session_;

  if (!message.contains("seq") || !message.at("seq").is_number_integer())
    return {dump(error_message("bad-message", "input needs an integer seq"))};
  const auto seq = message.at("seq").get<std::int64_t>();
  if (seq <= s.lastSeq)
    return {dump(error_message("bad-seq", "seq " + std::to_string(seq) + " does not follow " +
                                              std::to_string(s.lastSeq)))};

  const json& dx = message.value("dx", json());
  const json& dy = message.value("dy", json());
  if (!dx.is_number() || !dy.is_number())
    return {dump(error_message("bad-message", "input needs numeric dx and dy"))};
  const Vec2d delta(dx.get<double>(), dy.get<double>());
  if (!delta.allFinite()) return {dump(error_message("bad-message", "dx and dy must be finite"))};

  std::int64_t ticks = 1;
  if (message.contains("dt")) {
    if (!message.at("dt").is_number())
      return {dump(error_message("bad-message", "dt must be a number"))};
    const double dt = message.at("dt").get<double>();
    if (!std::isfinite(dt) || dt < 0 || dt > 10)
      return {dump(error_message("bad-message", "dt must be in [0, 10] seconds"))};
    ticks = s.quantizer.advance(dt);
  }
  s.lastSeq = seq;

  s.pendingDelta += delta;
  for (std::int64_t i = 0; i < ticks && !s.state.ended; ++i) {
    step(s.state, s.spec, s.pendingDelta, s.events);
    s.pendingDelta = Vec2d::Zero();
  }

  std::vector<std::string> replies{dump(state_message())};
  if (s.state.ended) {
    SessionLog log;
    log.header.source = "live";
    log.header.inputLabel = "Live";
    log.header.taskLabel = s.taskId;
    log.header.spec = s.spec;
    log.header.initialCursor = s.initialCursor;
    log.events = s.events;
    log.records = s.state.records;

    ordered_json done;
    done["type"] = "done";
    try {
      done["logId"] = sink_ ? sink_(log) : std::string{};
    } catch (const std::exception& e) {
      session_.reset();
      replies.push_back(dump(error_message("log-write-failed", e.what())));
      return replies;
    }
    done["summaries"] = ordered_json::array({to_json(compute_summary(log.records))});
    replies.push_back(dump(done));
    session_.reset();
  }
  return replies;
}

ordered_json TrialConnection::state_message() {
  auto& s = *session_;
  const auto& spec = s.spec;
  const auto& state = s.state;
  const std::int64_t elapsed = state.tick - state.subTaskStartTick;
  const double dt = spec.dt();

  ordered_json status;
  status["index"] = state.subTask;
  status["count"] = spec.subTasks.size();
  status["elapsed"] = static_cast<double>(elapsed) * dt;
  status["overlapping"] = state.overlapping;
  status["ended"] = state.ended;
  switch (spec.mode) {
    case TaskMode::Locate:
      status["remaining"] =
          static_cast<double>(std::max<std::int64_t>(0, locate_window_ticks(spec, state.subTask) - elapsed)) * dt;
      break;
    case TaskMode::Select:
      status["dwell"] = static_cast<double>(state.continuousOverlapTicks) * dt;
      status["dwellRequired"] = *spec.subTasks[state.subTask].dwellRequired;
      status["remaining"] =
          static_cast<double>(std::max<std::int64_t>(0, select_timeout_ticks(spec) - elapsed)) * dt;
      break;
    case TaskMode::Follow:
      status["overlapTime"] = static_cast<double>(state.cumulativeOverlapTicks) * dt;
      status["remaining"] =
          static_cast<double>(std::max<std::int64_t>(0, follow_fly_ticks(spec, state.subTask) - elapsed)) * dt;
      break;
  }

  ordered_json j;
  j["type"] = "state";
  j["tick"] = state.tick;
  j["cursor"] = to_json(state.cursor);
  j["target"] = to_json(current_target(spec, state));
  j["subTaskStatus"] = std::move(status);
  ordered_json events = ordered_json::array();
  for (std::size_t i = s.eventsSent; i < s.events.size(); ++i) events.push_back(to_json(s.events[i]));
  s.eventsSent = s.events.size();
  j["eventsSinceLast"] = std::move(events);
  return j;
}

}  // namespace assistlab
