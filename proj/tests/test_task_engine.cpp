#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "assistlab/task/task_engine.hpp"

#include <random>

using namespace assistlab;

namespace {

TaskSpec locate_spec(TargetRectd target, double window = 5.0) {
  TaskSpec spec;
  spec.id = "locate";
  spec.mode = TaskMode::Locate;
  SubTaskSpec s;
  s.target = target;
  s.availabilityWindow = window;
  spec.subTasks.push_back(s);
  return spec;
}

TaskSpec select_spec(TargetRectd target, double dwell = 1.0) {
  TaskSpec spec;
  spec.id = "select";
  spec.mode = TaskMode::Select;
  SubTaskSpec s;
  s.target = target;
  s.dwellRequired = dwell;
  spec.subTasks.push_back(s);
  return spec;
}

TaskSpec follow_spec(std::vector<Vec2d> path, double speed, double size = 20) {
  TaskSpec spec;
  spec.id = "follow";
  spec.mode = TaskMode::Follow;
  SubTaskSpec s;
  s.target = {0, 0, size, size, 0};
  s.path = std::move(path);
  s.speed = speed;
  spec.subTasks.push_back(s);
  return spec;
}

std::vector<EventKind> kinds(const std::vector<SessionEvent>& events, std::size_t from = 0) {
  std::vector<EventKind> out;
  for (std::size_t i = from; i < events.size(); ++i) out.push_back(events[i].kind);
  return out;
}

}  // namespace

TEST_CASE("start_session") {
  std::vector<SessionEvent> events;
  const auto spec = locate_spec({100, 100, 80, 80, 0});
  const auto state = start_session(spec, Vec2d(960, 540), events);
  CHECK(state.subTask == 0);
  CHECK(state.tick == 0);
  CHECK(state.cursor == Vec2d(960, 540));
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == EventKind::SubTaskStarted);
  CHECK(events[0].tick == 0);
}

TEST_CASE("start_session rejects an empty spec") {
  TaskSpec spec;
  std::vector<SessionEvent> events;
  CHECK_THROWS_AS(start_session(spec, Vec2d(0, 0), events), InvalidSpec);
}

TEST_CASE("start_session rejects mixed-mode sub-tasks") {
  auto spec = locate_spec({100, 100, 80, 80, 0});
  spec.subTasks[0].dwellRequired = 1.0;
  std::vector<SessionEvent> events;
  CHECK_THROWS_AS(start_session(spec, Vec2d(0, 0), events), InvalidSpec);
}

TEST_CASE("start_session clamps the cursor") {
  std::vector<SessionEvent> events;
  const auto spec = follow_spec({{100, 100}, {300, 100}}, 200);
  const auto state = start_session(spec, Vec2d(-5, -5), events);
  CHECK(state.cursor == Vec2d(0, 0));
}

TEST_CASE("locate single tick into the target") {
  std::vector<SessionEvent> events;
  const auto spec = locate_spec({100, 0, 10, 10, 0});
  auto state = start_session(spec, Vec2d(95, 5), events);
  const std::size_t before = events.size();
  step(state, spec, Vec2d(6, 0), events);

  const auto k = kinds(events, before);
  REQUIRE(k.size() >= 3);
  CHECK(k[0] == EventKind::CursorMoved);
  CHECK(k[1] == EventKind::OverlapEntered);
  CHECK(k[2] == EventKind::SubTaskSucceeded);
  CHECK(k.back() == EventKind::SessionEnded);
  CHECK(events[before].raw == Vec2d(6, 0));
  CHECK(state.cursor == Vec2d(101, 5));
  CHECK(state.ended);
  REQUIRE(state.records.size() == 1);
  CHECK(state.records[0].success);
  CHECK(*state.records[0].reachTime == doctest::Approx(1.0 / 60));
}

TEST_CASE("locate fails after its window") {
  std::vector<SessionEvent> events;
  const auto spec = locate_spec({100, 0, 10, 10, 0}, 1.0);
  auto state = start_session(spec, Vec2d(500, 500), events);
  int ticks = 0;
  while (!state.ended) {
    step(state, spec, Vec2d::Zero(), events);
    ++ticks;
  }
  CHECK(ticks == 61);
  CHECK(state.cursor == Vec2d(500, 500));
  REQUIRE(state.records.size() == 1);
  CHECK_FALSE(state.records[0].success);
  CHECK_FALSE(state.records[0].reachTime.has_value());
  for (const auto& e : events) {
    CHECK(e.kind != EventKind::OverlapEntered);
    CHECK(e.kind != EventKind::CursorMoved);
  }
}

TEST_CASE("select succeeds on the sixtieth overlapping tick") {
  std::vector<SessionEvent> events;
  const auto spec = select_spec({100, 100, 80, 80, 0});
  auto state = start_session(spec, Vec2d(140, 140), events);
  for (int i = 1; i <= 59; ++i) {
    step(state, spec, Vec2d::Zero(), events);
    CHECK_FALSE(state.ended);
  }
  step(state, spec, Vec2d::Zero(), events);
  CHECK(state.ended);
  bool found = false;
  for (const auto& e : events)
    if (e.kind == EventKind::SubTaskSucceeded) {
      CHECK(e.tick == 60);
      found = true;
    }
  CHECK(found);
  CHECK(*state.records[0].cumulativeOverlapTime == doctest::Approx(1.0));
}

TEST_CASE("select dwell resets on exit and keeps cumulative overlap") {
  std::vector<SessionEvent> events;
  const auto spec = select_spec({100, 100, 80, 80, 0});
  auto state = start_session(spec, Vec2d(175, 140), events);
  for (int i = 0; i < 30; ++i) step(state, spec, Vec2d::Zero(), events);
  step(state, spec, Vec2d(10, 0), events);  // out
  CHECK_FALSE(state.overlapping);
  CHECK(state.continuousOverlapTicks == 0);
  step(state, spec, Vec2d(-10, 0), events);  // back in
  while (!state.ended) step(state, spec, Vec2d::Zero(), events);
  CHECK(state.tick == 91);
  CHECK(state.records[0].success);
  CHECK(*state.records[0].cumulativeOverlapTime == doctest::Approx(90.0 / 60));
  CHECK(*state.records[0].dwellRequired == 1.0);
}

TEST_CASE("select times out") {
  std::vector<SessionEvent> events;
  auto spec = select_spec({100, 100, 80, 80, 0});
  spec.selectTimeout = 2.0;
  auto state = start_session(spec, Vec2d(500, 500), events);
  while (!state.ended) step(state, spec, Vec2d::Zero(), events);
  CHECK(state.tick == 121);
  CHECK_FALSE(state.records[0].success);
  CHECK(*state.records[0].cumulativeOverlapTime == 0.0);
}

TEST_CASE("follow target moves along its path") {
  std::vector<SessionEvent> events;
  const auto spec = follow_spec({{100, 100}, {160, 100}}, 60, 20);
  CHECK(follow_fly_ticks(spec, 0) == 60);
  auto state = start_session(spec, Vec2d(100, 100), events);
  step(state, spec, Vec2d::Zero(), events);
  const auto t1 = current_target(spec, state);
  CHECK(t1.center().x() == doctest::Approx(101));
  CHECK(t1.center().y() == doctest::Approx(100));
  while (!state.ended) step(state, spec, Vec2d::Zero(), events);
  CHECK(state.tick == 60);
  REQUIRE(state.records.size() == 1);
  const auto& r = state.records[0];
  CHECK(r.success);
  CHECK(*r.flyTime == doctest::Approx(1.0));
  CHECK(*r.overlapTime == doctest::Approx(10.0 / 60));
  CHECK(*r.overlapTime <= *r.flyTime);
}

TEST_CASE("follow without overlap fails") {
  std::vector<SessionEvent> events;
  const auto spec = follow_spec({{100, 100}, {160, 100}}, 600, 20);
  auto state = start_session(spec, Vec2d(900, 900), events);
  while (!state.ended) step(state, spec, Vec2d::Zero(), events);
  CHECK_FALSE(state.records[0].success);
  CHECK(*state.records[0].overlapTime == 0.0);
}

TEST_CASE("zero input outside a target is inert") {
  std::vector<SessionEvent> events;
  const auto spec = select_spec({100, 100, 80, 80, 0});
  auto state = start_session(spec, Vec2d(500, 500), events);
  const auto before = events.size();
  for (int i = 0; i < 10; ++i) step(state, spec, Vec2d::Zero(), events);
  CHECK(events.size() == before);
  CHECK(state.cursor == Vec2d(500, 500));
}

TEST_CASE("stepping an ended session throws") {
  std::vector<SessionEvent> events;
  const auto spec = locate_spec({100, 0, 10, 10, 0});
  auto state = start_session(spec, Vec2d(95, 5), events);
  step(state, spec, Vec2d(6, 0), events);
  REQUIRE(state.ended);
  CHECK_THROWS_AS(step(state, spec, Vec2d(1, 0), events), SessionAlreadyEnded);
}

TEST_CASE("non-finite input is rejected") {
  std::vector<SessionEvent> events;
  const auto spec = locate_spec({100, 0, 10, 10, 0});
  auto state = start_session(spec, Vec2d(95, 5), events);
  CHECK_THROWS(step(state, spec, Vec2d(std::nan(""), 0), events));
}

TEST_CASE("cursor is clamped to the canvas") {
  std::vector<SessionEvent> events;
  const auto spec = select_spec({100, 100, 80, 80, 0});
  auto state = start_session(spec, Vec2d(10, 10), events);
  step(state, spec, Vec2d(-50, 5000), events);
  CHECK(state.cursor == Vec2d(0, 1080));
}

TEST_CASE("path_position") {
  const std::vector<Vec2d> line{{0, 0}, {10, 0}};
  const std::vector<Vec2d> bend{{0, 0}, {10, 0}, {10, 10}};
  CHECK(path_position(line, 0) == Vec2d(0, 0));
  CHECK(path_position(line, 4) == Vec2d(4, 0));
  CHECK(path_position(bend, 15) == Vec2d(10, 5));
  CHECK(path_position(line, 99) == Vec2d(10, 0));
  CHECK(path_length(bend) == 20);
}

TEST_CASE("tick limits") {
  const auto spec = select_spec({100, 100, 80, 80, 0}, 0.5);
  CHECK(select_dwell_ticks(spec, 0) == 30);
  CHECK(select_timeout_ticks(spec) == 600);
  CHECK(locate_window_ticks(locate_spec({0, 0, 1, 1, 0}, 5.0), 0) == 300);
}

TEST_CASE("multi sub-task sessions under random input") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0, 6);
  for (TaskMode mode : {TaskMode::Locate, TaskMode::Select, TaskMode::Follow}) {
    TaskSpec spec;
    spec.id = "mixed";
    spec.mode = mode;
    for (int i = 0; i < 6; ++i) {
      SubTaskSpec s;
      s.target = {400.0 + 30 * i, 300, 60, 60, static_cast<TargetId>(i)};
      if (mode == TaskMode::Locate) s.availabilityWindow = 2.0;
      if (mode == TaskMode::Select) s.dwellRequired = 0.5;
      if (mode == TaskMode::Follow) {
        s.path = {{430, 330}, {630, 330}};
        s.speed = 400;
      }
      spec.subTasks.push_back(s);
    }
    spec.selectTimeout = 3;
    std::vector<SessionEvent> events;
    auto state = start_session(spec, Vec2d(430, 330), events);
    while (!state.ended) step(state, spec, Vec2d(noise(rng), noise(rng)), events);

    CHECK(state.records.size() == spec.subTasks.size());
    int terminal = 0;
    int started = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (i > 0) CHECK(events[i].tick >= events[i - 1].tick);
      if (events[i].kind == EventKind::SubTaskSucceeded || events[i].kind == EventKind::SubTaskFailed)
        ++terminal;
      if (events[i].kind == EventKind::SubTaskStarted) ++started;
    }
    CHECK(terminal == 6);
    CHECK(started == 6);
    CHECK(events.back().kind == EventKind::SessionEnded);
    for (const auto& r : state.records) CHECK(r.consistent());
  }
}

TEST_CASE("event kind names round trip") {
  for (EventKind k : {EventKind::SubTaskStarted, EventKind::CursorMoved, EventKind::OverlapEntered,
                      EventKind::OverlapExited, EventKind::SubTaskSucceeded, EventKind::SubTaskFailed,
                      EventKind::SessionEnded})
    CHECK(parse_event_kind(to_string(k)) == k);
  CHECK(parse_task_mode("follow") == TaskMode::Follow);
  CHECK_FALSE(parse_task_mode("hover").has_value());
}
