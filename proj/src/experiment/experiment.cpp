#include "assistlab/experiment/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

namespace assistlab {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> labels,
                          std::uint64_t repetition) {
  std::uint64_t h = splitmix64_mix(master);
  for (auto label : labels) h = splitmix64_mix(h ^ fnv1a64(label));
  return splitmix64_mix(h ^ repetition);
}

namespace {

struct Box {
  Vec2d lo;
  Vec2d hi;
  bool contains(const Vec2d& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
};

Box placement_box(const Canvas& canvas, double targetSize) {
  const double margin = std::min(targetSize / 2 + 20, std::min(canvas.width, canvas.height) / 2);
  return {{margin, margin}, {canvas.width - margin, canvas.height - margin}};
}

Vec2d sample_in(Xoshiro256ss& rng, const Box& box) {
  return {rng.uniform(box.lo.x(), box.hi.x()), rng.uniform(box.lo.y(), box.hi.y())};
}

constexpr int kPlacementAttempts = 64;

}  // namespace

TaskSpec generate_task(const TaskTemplate& tmpl, const Canvas& canvas, int tickRate,
                       const AssistConfigd& assist, std::uint64_t seed) {
  TaskSpec spec;
  spec.id = tmpl.name;
  spec.mode = tmpl.mode;
  spec.canvas = canvas;
  spec.tickRate = tickRate;
  spec.selectTimeout = tmpl.selectTimeout;
  spec.assist = assist;

  Xoshiro256ss rng(seed);
  const Box box = placement_box(canvas, tmpl.targetSize);
  Vec2d previous = canvas.center();

  for (int i = 0; i < tmpl.subTasks; ++i) {
    SubTaskSpec sub;
    sub.target.width = tmpl.targetSize;
    sub.target.height = tmpl.targetSize;
    sub.target.id = static_cast<TargetId>(i);

    if (tmpl.mode == TaskMode::Follow) {
      sub.path.push_back(previous);
      for (int leg = 0; leg < tmpl.legs; ++leg) {
        Vec2d next = previous;
        for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
          const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
          const double length = rng.uniform(tmpl.minLegLength, tmpl.maxLegLength);
          next = previous + length * Vec2d(std::cos(angle), std::sin(angle));
          if (box.contains(next)) break;
          // Fall back to heading for the middle of the canvas.
          const Vec2d inward = (canvas.center() - previous);
          if (attempt + 1 == kPlacementAttempts)
            next = previous + inward.normalized() * std::min(length, inward.norm());
        }
        sub.path.push_back(next);
        previous = next;
      }
      sub.speed = tmpl.speeds[static_cast<std::size_t>(i) % tmpl.speeds.size()];
      sub.target = sub.target.centered_at(sub.path.front());
    } else {
      Vec2d center = sample_in(rng, box);
      for (int attempt = 1; attempt < kPlacementAttempts &&
                            (center - previous).norm() < tmpl.minTargetSpacing;
           ++attempt)
        center = sample_in(rng, box);
      sub.target = sub.target.centered_at(center);
      if (tmpl.mode == TaskMode::Locate)
        sub.availabilityWindow = tmpl.availabilityWindow;
      else
        sub.dwellRequired = tmpl.dwellRequired;
      previous = center;
    }
    spec.subTasks.push_back(std::move(sub));
  }
  spec.validate();
  return spec;
}

Vec2d aim_point(const TaskSpec& spec, const SessionState& state) {
  return current_target(spec, state).center();
}

SessionLog run_headless(const TaskSpec& spec, const InputModel& model, const Vec2d& initialCursor,
                        const std::string& inputLabel, const std::string& taskLabel,
                        int repetition) {
  const double dt = spec.dt();
  model.validate(dt);

  SessionLog log;
  log.header.source = "headless";
  log.header.inputLabel = inputLabel;
  log.header.taskLabel = taskLabel;
  log.header.repetition = repetition;
  log.header.spec = spec;
  log.header.input = model;
  log.header.initialCursor = initialCursor;

  SessionState state = start_session(spec, initialCursor, log.events);
  InputState input(model.seed);
  while (!state.ended) {
    const double elapsed = static_cast<double>(state.tick - state.subTaskStartTick) * dt;
    const Vec2d delta = next_delta(model, state.cursor, aim_point(spec, state), elapsed, dt, input);
    step(state, spec, delta, log.events);
  }
  log.records = std::move(state.records);
  return log;
}

SessionLog run_with_deltas(const TaskSpec& spec, const std::vector<Vec2d>& deltas,
                           const Vec2d& initialCursor) {
  SessionLog log;
  log.header.spec = spec;
  log.header.initialCursor = initialCursor;
  SessionState state = start_session(spec, initialCursor, log.events);
  std::size_t next = 0;
  while (!state.ended) {
    const Vec2d delta = next < deltas.size() ? deltas[next] : Vec2d::Zero();
    ++next;
    step(state, spec, delta, log.events);
  }
  log.records = std::move(state.records);
  return log;
}

std::vector<Vec2d> deltas_from_events(const std::vector<SessionEvent>& events) {
  if (events.empty()) return {};
  std::vector<Vec2d> deltas(static_cast<std::size_t>(std::max<std::int64_t>(0, events.back().tick)),
                            Vec2d::Zero());
  for (const auto& e : events)
    if (e.kind == EventKind::CursorMoved && e.tick >= 1)
      deltas[static_cast<std::size_t>(e.tick - 1)] = e.raw;
  return deltas;
}

ReplayResult replay_log(const SessionLog& log) {
  const SessionLog again =
      run_with_deltas(log.header.spec, deltas_from_events(log.events), log.header.initialCursor);
  ReplayResult r;
  r.eventsMatch = again.events == log.events;
  r.recordsMatch = again.records == log.records;
  r.events = again.events;
  r.records = again.records;
  return r;
}

std::string log_file_name(const std::string& profile, const std::string& assist,
                          const std::string& task, int repetition) {
  char rep[16];
  std::snprintf(rep, sizeof rep, "r%03d", repetition);
  return profile + "__" + assist + "__" + task + "__" + rep + kSessionLogExtension;
}

namespace {

constexpr const char* kManifest = "cells.json";

struct Job {
  std::size_t cell;
  int repetition;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void finish_report(ExperimentResult& result, const std::string& runLabel, MetricsOptions options,
                   const std::vector<AssistMode>& cellModes, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const auto& cell = result.cells[i];
    result.conditions.push_back(
        {cell.task, labels[i], cellModes[i], compute_summary(cell.records, options)});
  }
  result.report = summarize(runLabel, result.conditions);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const fs::path& outDir, int jobs,
                                MetricsOptions options) {
  if (fs::exists(outDir) && !fs::is_empty(outDir))
    throw ConfigError("--out", "directory " + outDir.string() + " exists and is not empty");

  const fs::path staging = outDir.string() + ".partial";
  fs::remove_all(staging);
  fs::create_directories(staging / "logs");

  try {
    ExperimentResult result;
    std::vector<AssistMode> cellModes;
    std::vector<std::string> labels;
    std::vector<const NamedProfile*> cellProfiles;
    std::vector<const NamedAssist*> cellAssists;
    std::vector<const TaskTemplate*> cellTasks;
    for (const auto& task : config.tasks)
      for (const auto& profile : config.profiles)
        for (const auto& assist : config.assists) {
          result.cells.push_back({profile.name, assist.name, task.name, {}, {}});
          cellModes.push_back(assist.config.mode);
          labels.push_back(profile.label);
          cellProfiles.push_back(&profile);
          cellAssists.push_back(&assist);
          cellTasks.push_back(&task);
        }

    std::vector<Job> work;
    for (std::size_t c = 0; c < result.cells.size(); ++c)
      for (int rep = 0; rep < config.repetitions; ++rep) work.push_back({c, rep});

    std::vector<std::vector<SubTaskRecord>> jobRecords(work.size());
    std::atomic<std::size_t> nextJob{0};
    std::exception_ptr failure;
    std::mutex failureMutex;

    auto worker = [&] {
      for (std::size_t j = nextJob++; j < work.size(); j = nextJob++) {
        try {
          const auto [c, rep] = work[j];
          const auto& tmpl = *cellTasks[c];
          const auto& profile = *cellProfiles[c];
          const TaskSpec spec = generate_task(tmpl, config.canvas, config.tickRate,
                                              cellAssists[c]->config,
                                              derive_seed(config.masterSeed, {"task", tmpl.name},
                                                          static_cast<std::uint64_t>(rep)));
          InputModel model = profile.model;
          model.seed = derive_seed(config.masterSeed, {"input", profile.name, tmpl.name},
                                   static_cast<std::uint64_t>(rep));
          const SessionLog log =
              run_headless(spec, model, config.canvas.center(), profile.label, tmpl.name, rep);
          const auto& cell = result.cells[c];
          write_log(log, staging / "logs" / log_file_name(cell.profile, cell.assist, cell.task, rep));
          jobRecords[j] = log.records;
        } catch (...) {
          std::lock_guard lock(failureMutex);
          if (!failure) failure = std::current_exception();
          nextJob = work.size();
        }
      }
    };

    const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    ordered_json manifest;
    manifest["runLabel"] = config.runLabel;
    manifest["cells"] = ordered_json::array();
    for (std::size_t j = 0; j < work.size(); ++j) {
      auto& cell = result.cells[work[j].cell];
      const auto name = log_file_name(cell.profile, cell.assist, cell.task, work[j].repetition);
      cell.logs.push_back(outDir / "logs" / name);
      cell.records.insert(cell.records.end(), jobRecords[j].begin(), jobRecords[j].end());
    }
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
      const auto& cell = result.cells[c];
      ordered_json entry;
      entry["task"] = cell.task;
      entry["profile"] = cell.profile;
      entry["label"] = labels[c];
      entry["assist"] = cell.assist;
      entry["assistMode"] = std::string(to_string(cellModes[c]));
      entry["logs"] = ordered_json::array();
      for (const auto& p : cell.logs) entry["logs"].push_back(p.filename().string());
      manifest["cells"].push_back(std::move(entry));
    }

    finish_report(result, config.runLabel, options, cellModes, labels);
    write_text(staging / kManifest, manifest.dump(2) + "\n");
    write_text(staging / "report.csv", to_csv(result.report));
    write_text(staging / "report.txt", to_text(result.report));

    if (fs::exists(outDir)) fs::remove(outDir);
    fs::rename(staging, outDir);
    return result;
  } catch (...) {
    std::error_code ignored;
    fs::remove_all(staging, ignored);
    throw;
  }
}

ExperimentResult report_directory(const fs::path& dir, MetricsOptions options) {
  const fs::path manifestPath = dir / kManifest;
  std::ifstream in(manifestPath);
  if (!in) throw std::runtime_error("cannot open " + manifestPath.string());
  const json manifest = json::parse(in);

  ExperimentResult result;
  std::vector<AssistMode> cellModes;
  std::vector<std::string> labels;
  for (const auto& entry : manifest.at("cells")) {
    CellResult cell;
    cell.task = entry.at("task").get<std::string>();
    cell.profile = entry.at("profile").get<std::string>();
    cell.assist = entry.at("assist").get<std::string>();
    const auto mode = parse_assist_mode(entry.at("assistMode").get<std::string>());
    if (!mode) throw std::runtime_error("manifest has an unknown assist mode");
    cellModes.push_back(*mode);
    labels.push_back(entry.at("label").get<std::string>());
    for (const auto& name : entry.at("logs")) {
      const fs::path path = dir / "logs" / name.get<std::string>();
      const SessionLog log = read_log(path);
      cell.logs.push_back(path);
      cell.records.insert(cell.records.end(), log.records.begin(), log.records.end());
    }
    result.cells.push_back(std::move(cell));
  }
  finish_report(result, manifest.at("runLabel").get<std::string>(), options, cellModes, labels);
  return result;
}

}  // namespace assistlab
