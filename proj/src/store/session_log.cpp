#include "assistlab/store/session_log.hpp"

#include <fstream>
#include <sstream>

namespace assistlab {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

void put_optional(ordered_json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = *v;
}

}  // namespace

ordered_json to_json(const Vec2d& v) { return ordered_json::array({v.x(), v.y()}); }

Vec2d vec2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [x, y]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

ordered_json to_json(const TargetRectd& r) {
  ordered_json j;
  j["x"] = r.x;
  j["y"] = r.y;
  j["w"] = r.width;
  j["h"] = r.height;
  j["id"] = r.id;
  return j;
}

TargetRectd target_from_json(const json& j) {
  TargetRectd r;
  r.x = j.at("x").get<double>();
  r.y = j.at("y").get<double>();
  r.width = j.at("w").get<double>();
  r.height = j.at("h").get<double>();
  r.id = j.value("id", TargetId{0});
  return r;
}

ordered_json to_json(const AssistConfigd& c) {
  ordered_json j;
  j["mode"] = std::string(to_string(c.mode));
  j["influence"] = c.influence;
  j["predictionSteps"] = c.predictionSteps;
  j["influenceDistance"] = c.influenceDistance;
  j["assistGain"] = c.assistGain;
  return j;
}

AssistConfigd assist_from_json(const json& j, AssistConfigd defaults) {
  AssistConfigd c = defaults;
  if (j.contains("mode")) {
    const auto name = j.at("mode").get<std::string>();
    const auto mode = parse_assist_mode(name);
    if (!mode)
      throw std::invalid_argument("unknown assist mode \"" + name +
                                  "\" (allowed: none, interpolation, gravity)");
    c.mode = *mode;
  }
  c.influence = j.value("influence", c.influence);
  c.predictionSteps = j.value("predictionSteps", c.predictionSteps);
  c.influenceDistance = j.value("influenceDistance", c.influenceDistance);
  c.assistGain = j.value("assistGain", c.assistGain);
  return c;
}

ordered_json to_json(const TaskSpec& spec) {
  ordered_json j;
  j["id"] = spec.id;
  j["mode"] = std::string(to_string(spec.mode));
  j["canvas"] = ordered_json::array({spec.canvas.width, spec.canvas.height});
  j["tickRate"] = spec.tickRate;
  j["selectTimeout"] = spec.selectTimeout;
  j["assist"] = to_json(spec.assist);
  ordered_json subs = ordered_json::array();
  for (const auto& s : spec.subTasks) {
    ordered_json sj;
    sj["target"] = to_json(s.target);
    put_optional(sj, "availabilityWindow", s.availabilityWindow);
    put_optional(sj, "dwellRequired", s.dwellRequired);
    if (!s.path.empty()) {
      ordered_json path = ordered_json::array();
      for (const auto& w : s.path) path.push_back(to_json(w));
      sj["path"] = std::move(path);
    }
    put_optional(sj, "speed", s.speed);
    subs.push_back(std::move(sj));
  }
  j["subTasks"] = std::move(subs);
  return j;
}

TaskSpec task_spec_from_json(const json& j) {
  TaskSpec spec;
  spec.id = j.value("id", std::string{});
  const auto modeName = j.at("mode").get<std::string>();
  const auto mode = parse_task_mode(modeName);
  if (!mode) throw std::invalid_argument("unknown task mode \"" + modeName + "\"");
  spec.mode = *mode;
  const auto canvas = vec2_from_json(j.at("canvas"));
  spec.canvas = {canvas.x(), canvas.y()};
  spec.tickRate = j.at("tickRate").get<int>();
  spec.selectTimeout = j.value("selectTimeout", spec.selectTimeout);
  if (j.contains("assist")) spec.assist = assist_from_json(j.at("assist"));
  for (const auto& sj : j.at("subTasks")) {
    SubTaskSpec s;
    s.target = target_from_json(sj.at("target"));
    s.availabilityWindow = optional_number(sj, "availabilityWindow");
    s.dwellRequired = optional_number(sj, "dwellRequired");
    if (sj.contains("path"))
      for (const auto& w : sj.at("path")) s.path.push_back(vec2_from_json(w));
    s.speed = optional_number(sj, "speed");
    spec.subTasks.push_back(std::move(s));
  }
  return spec;
}

ordered_json to_json(const InputModel& m) {
  ordered_json j;
  j["kind"] = std::string(to_string(m.kind));
  j["gainP"] = m.gainP;
  j["maxSpeed"] = m.maxSpeed;
  j["tremorSigma"] = m.tremorSigma;
  j["reactionDelay"] = m.reactionDelay;
  j["seed"] = m.seed;
  if (m.kind == InputKind::Scripted) {
    ordered_json script = ordered_json::array();
    for (const auto& d : m.script) script.push_back(to_json(d));
    j["script"] = std::move(script);
  }
  return j;
}

InputModel input_model_from_json(const json& j) {
  InputModel m;
  const auto kindName = j.at("kind").get<std::string>();
  const auto kind = parse_input_kind(kindName);
  if (!kind) throw std::invalid_argument("unknown input kind \"" + kindName + "\"");
  m.kind = *kind;
  m.gainP = j.value("gainP", m.gainP);
  m.maxSpeed = j.value("maxSpeed", m.maxSpeed);
  m.tremorSigma = j.value("tremorSigma", m.tremorSigma);
  m.reactionDelay = j.value("reactionDelay", m.reactionDelay);
  m.seed = j.value("seed", m.seed);
  if (j.contains("script"))
    for (const auto& d : j.at("script")) m.script.push_back(vec2_from_json(d));
  return m;
}

ordered_json to_json(const SessionEvent& e) {
  ordered_json j;
  j["type"] = "event";
  j["tick"] = e.tick;
  j["kind"] = std::string(to_string(e.kind));
  j["subTask"] = e.subTask;
  j["cursor"] = to_json(e.cursor);
  j["target"] = to_json(e.target);
  if (e.kind == EventKind::CursorMoved) j["raw"] = to_json(e.raw);
  return j;
}

SessionEvent event_from_json(const json& j) {
  SessionEvent e;
  e.tick = j.at("tick").get<std::int64_t>();
  const auto kindName = j.at("kind").get<std::string>();
  const auto kind = parse_event_kind(kindName);
  if (!kind) throw std::invalid_argument("unknown event kind \"" + kindName + "\"");
  e.kind = *kind;
  e.subTask = j.at("subTask").get<std::size_t>();
  e.cursor = vec2_from_json(j.at("cursor"));
  e.target = target_from_json(j.at("target"));
  if (j.contains("raw")) e.raw = vec2_from_json(j.at("raw"));
  return e;
}

ordered_json to_json(const SubTaskRecord& r) {
  ordered_json j;
  j["mode"] = std::string(to_string(r.mode));
  j["index"] = r.index;
  j["success"] = r.success;
  put_optional(j, "reachTime", r.reachTime);
  put_optional(j, "cumulativeOverlapTime", r.cumulativeOverlapTime);
  put_optional(j, "dwellRequired", r.dwellRequired);
  put_optional(j, "overlapTime", r.overlapTime);
  put_optional(j, "flyTime", r.flyTime);
  return j;
}

SubTaskRecord record_from_json(const json& j) {
  SubTaskRecord r;
  const auto modeName = j.at("mode").get<std::string>();
  const auto mode = parse_task_mode(modeName);
  if (!mode) throw std::invalid_argument("unknown task mode \"" + modeName + "\"");
  r.mode = *mode;
  r.index = j.at("index").get<std::size_t>();
  r.success = j.at("success").get<bool>();
  r.reachTime = optional_number(j, "reachTime");
  r.cumulativeOverlapTime = optional_number(j, "cumulativeOverlapTime");
  r.dwellRequired = optional_number(j, "dwellRequired");
  r.overlapTime = optional_number(j, "overlapTime");
  r.flyTime = optional_number(j, "flyTime");
  return r;
}

std::size_t write_log(const SessionLog& log, std::ostream& out) {
  std::size_t bytes = 0;
  auto emit = [&](const ordered_json& j) {
    const std::string line = j.dump();
    out << line << '\n';
    bytes += line.size() + 1;
  };

  ordered_json header;
  header["type"] = "header";
  header["schema"] = log.header.schema;
  header["source"] = log.header.source;
  header["inputLabel"] = log.header.inputLabel;
  header["taskLabel"] = log.header.taskLabel;
  header["repetition"] = log.header.repetition;
  header["initialCursor"] = to_json(log.header.initialCursor);
  header["spec"] = to_json(log.header.spec);
  header["input"] = log.header.input ? to_json(*log.header.input) : ordered_json(nullptr);
  emit(header);

  for (const auto& e : log.events) emit(to_json(e));

  ordered_json trailer;
  trailer["type"] = "trailer";
  ordered_json records = ordered_json::array();
  for (const auto& r : log.records) records.push_back(to_json(r));
  trailer["records"] = std::move(records);
  emit(trailer);

  if (!out) throw std::runtime_error("failed writing session log");
  return bytes;
}

std::size_t write_log(const SessionLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const std::size_t bytes = write_log(log, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
  return bytes;
}

std::string log_to_string(const SessionLog& log) {
  std::ostringstream out;
  write_log(log, out);
  return out.str();
}

SessionLog read_log(std::istream& in) {
  SessionLog log;
  std::string text;
  std::size_t lineNumber = 0;
  bool haveHeader = false;
  bool haveTrailer = false;

  while (std::getline(in, text)) {
    ++lineNumber;
    if (haveTrailer) throw CorruptLine(lineNumber, "content after trailer");

    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw CorruptLine(lineNumber, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
      throw CorruptLine(lineNumber, "record without a type");
    const auto type = j.at("type").get<std::string>();

    try {
      if (!haveHeader) {
        if (type != "header") throw CorruptLine(lineNumber, "first line must be the header");
        const int schema = j.at("schema").get<int>();
        if (schema != kSessionSchemaVersion) throw SchemaVersionUnsupported(schema);
        auto& h = log.header;
        h.schema = schema;
        h.source = j.at("source").get<std::string>();
        h.inputLabel = j.at("inputLabel").get<std::string>();
        h.taskLabel = j.at("taskLabel").get<std::string>();
        h.repetition = j.at("repetition").get<int>();
        h.initialCursor = vec2_from_json(j.at("initialCursor"));
        h.spec = task_spec_from_json(j.at("spec"));
        if (!j.at("input").is_null()) h.input = input_model_from_json(j.at("input"));
        haveHeader = true;
      } else if (type == "event") {
        SessionEvent e = event_from_json(j);
        if (!log.events.empty() && e.tick < log.events.back().tick)
          throw CorruptLine(lineNumber, "event tick " + std::to_string(e.tick) +
                                            " precedes tick " +
                                            std::to_string(log.events.back().tick));
        log.events.push_back(std::move(e));
      } else if (type == "trailer") {
        for (const auto& r : j.at("records")) log.records.push_back(record_from_json(r));
        haveTrailer = true;
      } else {
        throw CorruptLine(lineNumber, "unknown record type \"" + type + "\"");
      }
    } catch (const json::exception& e) {
      throw CorruptLine(lineNumber, e.what());
    } catch (const std::invalid_argument& e) {
      throw CorruptLine(lineNumber, e.what());
    }
  }

  if (!haveHeader) throw CorruptLine(1, "empty log");
  if (!haveTrailer) throw CorruptLine(lineNumber, "missing trailer");
  return log;
}

SessionLog read_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_log(in);
}

}  // namespace assistlab
