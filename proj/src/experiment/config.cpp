#include "assistlab/experiment/experiment.hpp"

#include <fstream>
#include <set>

namespace assistlab {

using nlohmann::json;

namespace {

std::string default_label(const std::string& profile) {
  if (profile == "mouse-like") return "Mouse";
  if (profile == "head-like") return "Head";
  if (profile == "image-like") return "Image";
  return profile;
}

template<typename T>
T field(const json& j, const char* key, const std::string& where, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key, "has the wrong type");
  }
}

NamedProfile parse_profile(const json& j, const std::string& where) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    auto model = named_profile(name);
    if (!model)
      throw ConfigError(where, "unknown profile \"" + name +
                                   "\" (allowed: mouse-like, head-like, image-like, or an object)");
    return {name, default_label(name), *model};
  }
  if (!j.is_object()) throw ConfigError(where, "must be a profile name or object");

  NamedProfile p;
  p.name = field<std::string>(j, "name", where, "");
  if (p.name.empty()) throw ConfigError(where + ".name", "is required");
  const auto base = field<std::string>(j, "base", where, p.name);
  if (auto model = named_profile(base)) {
    p.model = *model;
  } else if (j.contains("base")) {
    throw ConfigError(where + ".base", "unknown profile \"" + base + "\"");
  }
  p.label = field<std::string>(j, "label", where, default_label(base));
  if (j.contains("kind")) {
    const auto kindName = field<std::string>(j, "kind", where, "");
    const auto kind = parse_input_kind(kindName);
    if (!kind || *kind == InputKind::Scripted)
      throw ConfigError(where + ".kind", "unknown input kind \"" + kindName +
                                             "\" (allowed: pure-pursuit, noisy-pursuit)");
    p.model.kind = *kind;
  }
  p.model.gainP = field(j, "gainP", where, p.model.gainP);
  p.model.maxSpeed = field(j, "maxSpeed", where, p.model.maxSpeed);
  p.model.tremorSigma = field(j, "tremorSigma", where, p.model.tremorSigma);
  p.model.reactionDelay = field(j, "reactionDelay", where, p.model.reactionDelay);
  return p;
}

NamedAssist parse_assist(const json& j, const std::string& where, const AssistConfigd& defaults) {
  NamedAssist a;
  json body = j;
  if (j.is_string()) body = json{{"mode", j.get<std::string>()}};
  if (!body.is_object()) throw ConfigError(where, "must be an assist mode name or object");
  if (!body.contains("mode")) throw ConfigError(where + ".mode", "is required");
  try {
    a.config = assist_from_json(body, defaults);
  } catch (const json::exception&) {
    throw ConfigError(where, "has a field with the wrong type");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ".mode", e.what());
  }
  a.name = field<std::string>(body, "name", where, std::string(to_string(a.config.mode)));
  try {
    a.config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where, e.what());
  }
  return a;
}

TaskTemplate parse_task(const json& j, const std::string& where) {
  json body = j;
  if (j.is_string()) body = json{{"mode", j.get<std::string>()}};
  if (!body.is_object()) throw ConfigError(where, "must be a task mode name or object");

  TaskTemplate t;
  const auto modeName = field<std::string>(body, "mode", where, "");
  const auto mode = parse_task_mode(modeName);
  if (!mode)
    throw ConfigError(where + ".mode",
                      "unknown task mode \"" + modeName + "\" (allowed: locate, select, follow)");
  t.mode = *mode;
  t.name = field<std::string>(body, "name", where, modeName);
  t.subTasks = field(body, "subTasks", where, t.subTasks);
  t.targetSize = field(body, "targetSize", where, t.targetSize);
  t.availabilityWindow = field(body, "availabilityWindow", where, t.availabilityWindow);
  t.dwellRequired = field(body, "dwellRequired", where, t.dwellRequired);
  t.selectTimeout = field(body, "selectTimeout", where, t.selectTimeout);
  t.speeds = field(body, "speeds", where, t.speeds);
  t.minLegLength = field(body, "minLegLength", where, t.minLegLength);
  t.maxLegLength = field(body, "maxLegLength", where, t.maxLegLength);
  t.legs = field(body, "legs", where, t.legs);
  t.minTargetSpacing = field(body, "minTargetSpacing", where, t.minTargetSpacing);

  if (t.subTasks < 1) throw ConfigError(where + ".subTasks", "must be >= 1");
  if (!(t.targetSize > 0)) throw ConfigError(where + ".targetSize", "must be > 0");
  if (!(t.availabilityWindow > 0)) throw ConfigError(where + ".availabilityWindow", "must be > 0");
  if (!(t.dwellRequired > 0)) throw ConfigError(where + ".dwellRequired", "must be > 0");
  if (!(t.selectTimeout > 0)) throw ConfigError(where + ".selectTimeout", "must be > 0");
  if (t.speeds.empty()) throw ConfigError(where + ".speeds", "must not be empty");
  for (double s : t.speeds)
    if (!(s > 0)) throw ConfigError(where + ".speeds", "must all be > 0");
  if (!(t.minLegLength > 0) || t.maxLegLength < t.minLegLength)
    throw ConfigError(where + ".minLegLength", "must satisfy 0 < minLegLength <= maxLegLength");
  if (t.legs < 1) throw ConfigError(where + ".legs", "must be >= 1");
  if (!(t.minTargetSpacing >= 0)) throw ConfigError(where + ".minTargetSpacing", "must be >= 0");
  return t;
}

template<typename T, typename Parse>
std::vector<T> parse_list(const json& doc, const char* key, Parse parse) {
  if (!doc.contains(key)) throw ConfigError(key, "is required");
  const json& list = doc.at(key);
  if (!list.is_array() || list.empty()) throw ConfigError(key, "must be a non-empty array");
  std::vector<T> out;
  for (std::size_t i = 0; i < list.size(); ++i)
    out.push_back(parse(list[i], std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

template<typename T>
void require_unique_names(const std::vector<T>& items, const char* key) {
  std::set<std::string> seen;
  for (const auto& item : items)
    if (!seen.insert(item.name).second)
      throw ConfigError(key, "duplicate name \"" + item.name + "\"");
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("(root)", "config must be a JSON object");

  ExperimentConfig c;
  if (!doc.contains("masterSeed"))
    throw ConfigError("masterSeed", "is required; runs are never seeded from the clock");
  if (!doc.at("masterSeed").is_number_unsigned())
    throw ConfigError("masterSeed", "must be a non-negative integer");
  c.masterSeed = doc.at("masterSeed").get<std::uint64_t>();

  c.runLabel = field<std::string>(doc, "runLabel", "(root)", c.runLabel);
  c.repetitions = field(doc, "repetitions", "(root)", c.repetitions);
  if (c.repetitions < 1) throw ConfigError("repetitions", "must be >= 1");
  c.tickRate = field(doc, "tickRate", "(root)", c.tickRate);
  if (c.tickRate < 1) throw ConfigError("tickRate", "must be >= 1");
  if (doc.contains("canvas")) {
    const auto size = field<std::vector<double>>(doc, "canvas", "(root)", {});
    if (size.size() != 2 || !(size[0] > 0) || !(size[1] > 0))
      throw ConfigError("canvas", "must be [width, height] with positive values");
    c.canvas = {size[0], size[1]};
  }

  AssistConfigd assistDefaults;
  if (doc.contains("assistDefaults")) {
    try {
      assistDefaults = assist_from_json(doc.at("assistDefaults"));
    } catch (const std::exception& e) {
      throw ConfigError("assistDefaults", e.what());
    }
  }

  c.profiles = parse_list<NamedProfile>(doc, "profiles", parse_profile);
  c.assists = parse_list<NamedAssist>(doc, "assists", [&](const json& j, const std::string& w) {
    return parse_assist(j, w, assistDefaults);
  });
  c.tasks = parse_list<TaskTemplate>(doc, "tasks", parse_task);
  require_unique_names(c.profiles, "profiles");
  require_unique_names(c.assists, "assists");
  require_unique_names(c.tasks, "tasks");

  const double dt = 1.0 / c.tickRate;
  for (std::size_t i = 0; i < c.profiles.size(); ++i) {
    try {
      c.profiles[i].model.validate(dt);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("profiles[" + std::to_string(i) + "]", e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), e.what());
  }
  return parse_config(doc);
}

}  // namespace assistlab
