#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "assistlab/experiment/experiment.hpp"
#include "event_oracle.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace assistlab;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = ASSISTLAB_GOLDEN_DIR;
const fs::path kConfigs = ASSISTLAB_CONFIG_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<fs::path> golden_logs() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kGolden / "logs")) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("records rebuilt from raw events match the trailer") {
  const auto logs = golden_logs();
  REQUIRE(logs.size() == 20);
  for (const auto& path : logs) {
    INFO(path.filename().string());
    const SessionLog log = read_log(path);
    const auto rebuilt = testing::records_from_events(log.header, log.events);
    CHECK(rebuilt == log.records);
    for (bool literal : {false, true}) {
      const MetricsOptions options{literal};
      CHECK(compute_summary(rebuilt, options) == compute_summary(log.records, options));
    }
    const auto corrected = compute_summary(log.records);
    const auto literal = compute_summary(log.records, {true});
    if (corrected.timeMetric) {
      CHECK(*literal.timeMetric == *corrected.timeMetric * static_cast<double>(corrected.successes) /
                                       static_cast<double>(corrected.n));
    }
  }
}

TEST_CASE("golden logs replay exactly") {
  for (const auto& path : golden_logs()) {
    INFO(path.filename().string());
    const auto replay = replay_log(read_log(path));
    CHECK(replay.eventsMatch);
    CHECK(replay.recordsMatch);
  }
}

TEST_CASE("golden corpus regenerates byte for byte") {
  const fs::path out = fs::temp_directory_path() / "assistlab_golden_regen";
  fs::remove_all(out);
  run_experiment(load_config(kConfigs / "golden.json"), out, 4);
  for (const auto& path : golden_logs()) {
    INFO(path.filename().string());
    CHECK(slurp(out / "logs" / path.filename()) == slurp(path));
  }
  CHECK(slurp(out / "report.csv") == slurp(kGolden / "report.csv"));
  CHECK(slurp(out / "report.txt") == slurp(kGolden / "report.txt"));
  CHECK(slurp(out / "cells.json") == slurp(kGolden / "cells.json"));
  fs::remove_all(out);
}

TEST_CASE("report rebuilt from golden trailers matches") {
  const auto result = report_directory(kGolden);
  CHECK(to_csv(result.report) == slurp(kGolden / "report.csv"));
}
