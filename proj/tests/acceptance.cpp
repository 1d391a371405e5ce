// One PASS/FAIL line per acceptance criterion; exits nonzero if any fail.

#include "assistlab/core/assist.hpp"
#include "assistlab/experiment/experiment.hpp"
#include "event_oracle.hpp"
#include "property_checks.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace assistlab;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = ASSISTLAB_GOLDEN_DIR;
const fs::path kConfigs = ASSISTLAB_CONFIG_DIR;
const std::string kCli = ASSISTLAB_CLI;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("assistlab_accept_" + name);
  fs::remove_all(p);
  return p;
}

bool near(const Vec2d& a, const Vec2d& b) { return (a - b).cwiseAbs().maxCoeff() <= 1e-9; }

void unit_examples() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<TargetRectd> one{{10, 0, 2, 2, 0}};
  int passed = 0;
  int total = 0;
  auto expect = [&](bool ok) {
    ++total;
    if (ok) ++passed;
  };

  expect(near(gravity_map_influence(one, Vec2d(5, 1), 10.0), Vec2d(0.75, 0)));
  expect(near(gravity_map_influence(one, Vec2d(11, 1), 10.0), Vec2d(0, 0)));
  expect(near(gravity_map_influence(one, Vec2d(0, 1), 10.0), Vec2d(0, 0)));

  auto p = interpolation_prediction(Vec2d(0, 0), Vec2d(1, 0), Vec2d(5, 0), 0.8, 1);
  expect(p.size() == 2 && near(p[0], Vec2d(1, 0)) && near(p[1], Vec2d(1, 0)));
  p = interpolation_prediction(Vec2d(0, 0), Vec2d(0, 1), Vec2d(5, 0), 0.8, 1);
  expect(p.size() == 2 && near(p[1], Vec2d(0, 1)));
  p = interpolation_prediction(Vec2d(3, 4), Vec2d(0, 0), Vec2d(5, 0), 0.8, 1);
  expect(p.size() == 2 && near(p[0], Vec2d(3, 4)) && near(p[1], Vec2d(3, 4)));

  AssistConfigd config;
  config.influenceDistance = 10;
  config.mode = AssistMode::None;
  expect(near(apply_assist(config, Vec2d(5, 1), Vec2d(2, 3), one), Vec2d(2, 3)));
  config.mode = AssistMode::GravityMap;
  expect(near(apply_assist(config, Vec2d(5, 1), Vec2d(1, 0), one), Vec2d(1.75, 0)));

  const double elapsed = seconds_since(t0);
  std::ostringstream d;
  d << passed << "/" << total << " examples at 1e-9 in " << elapsed << " s";
  report("algorithm unit examples", passed == total && elapsed < 1.0, d.str());
}

void properties() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = testing::run_all_properties(1000, 0xacce);
  const double elapsed = seconds_since(t0);
  bool ok = results.size() == 10 && elapsed < 30.0;
  std::string firstFailure;
  int minCases = results.empty() ? 0 : results.front().cases;
  for (const auto& r : results) {
    ok = ok && r.passed() && r.cases >= 1000;
    minCases = std::min(minCases, r.cases);
    if (!r.passed() && firstFailure.empty()) firstFailure = " first failure " + r.name + ": " + r.firstFailure;
  }
  std::ostringstream d;
  d << results.size() << " properties, >= " << minCases << " cases each, " << elapsed << " s"
    << firstFailure;
  report("property suite", ok, d.str());
}

void oracle() {
  int logs = 0;
  int matched = 0;
  bool scaling = true;
  for (const auto& e : fs::directory_iterator(kGolden / "logs")) {
    ++logs;
    const auto log = read_log(e.path());
    const auto rebuilt = testing::records_from_events(log.header, log.events);
    const auto corrected = compute_summary(log.records);
    const auto literal = compute_summary(log.records, {true});
    if (rebuilt == log.records && compute_summary(rebuilt) == corrected &&
        compute_summary(rebuilt, {true}) == literal)
      ++matched;
    if (corrected.timeMetric &&
        *literal.timeMetric != *corrected.timeMetric * static_cast<double>(corrected.successes) /
                                   static_cast<double>(corrected.n))
      scaling = false;
  }
  std::ostringstream d;
  d << matched << "/" << logs << " golden logs match the event oracle, literal scaling "
    << (scaling ? "exact" : "inexact");
  report("metrics oracle equivalence", logs == 20 && matched == logs && scaling, d.str());
}

void determinism() {
  const auto config = load_config(kConfigs / "golden.json");
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  run_experiment(config, a, 1);
  run_experiment(config, b, 4);
  int files = 0;
  int identical = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    if (slurp(e.path()) == slurp(b / fs::relative(e.path(), a))) ++identical;
  }
  fs::remove_all(a);
  fs::remove_all(b);
  std::ostringstream d;
  d << identical << "/" << files << " files byte-identical across two runs";
  report("determinism", files > 20 && identical == files, d.str());
}

const ModeSummary* find(const ExperimentResult& result, const std::string& task, AssistMode assist) {
  for (const auto& c : result.conditions)
    if (c.task == task && c.input == "Head" && c.assist == assist) return &c.summary;
  return nullptr;
}

void directional() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out = scratch("directional");
  const auto result = run_experiment(load_config(kConfigs / "acceptance.json"), out, 4);
  fs::remove_all(out);
  const double elapsed = seconds_since(t0);

  const auto* sNone = find(result, "select", AssistMode::None);
  const auto* sGrav = find(result, "select", AssistMode::GravityMap);
  const auto* fNone = find(result, "follow", AssistMode::None);
  const auto* fGrav = find(result, "follow", AssistMode::GravityMap);
  const auto* lNone = find(result, "locate", AssistMode::None);
  const auto* lGrav = find(result, "locate", AssistMode::GravityMap);
  if (!sNone || !sGrav || !fNone || !fGrav || !lNone || !lGrav) {
    report("directional select", false, "missing cells");
    report("directional follow", false, "missing cells");
    report("directional locate", false, "missing cells");
    return;
  }
  auto fmt = [](const ModeSummary& s) {
    std::ostringstream o;
    o << s.successPct << "% / " << (s.timeMetric ? std::to_string(*s.timeMetric) : "-");
    return o.str();
  };
  const bool timeDown = sNone->timeMetric && sGrav->timeMetric && *sGrav->timeMetric < *sNone->timeMetric;
  report("directional select", sGrav->successPct - sNone->successPct >= 5.0 && timeDown,
         "none " + fmt(*sNone) + ", gravity " + fmt(*sGrav));
  report("directional follow",
         fNone->timeMetric && fGrav->timeMetric && *fGrav->timeMetric > *fNone->timeMetric,
         "none " + fmt(*fNone) + ", gravity " + fmt(*fGrav));
  report("directional locate",
         lNone->timeMetric && lGrav->timeMetric && *lGrav->timeMetric <= *lNone->timeMetric &&
             elapsed < 300.0,
         "none " + fmt(*lNone) + ", gravity " + fmt(*lGrav) + ", run took " +
             std::to_string(elapsed) + " s");
}

int run_cli(const std::string& args, std::string& output) {
  FILE* pipe = popen((kCli + " " + args + " 2>&1").c_str(), "r");
  if (!pipe) return -1;
  char buffer[4096];
  while (std::size_t n = fread(buffer, 1, sizeof buffer, pipe)) output.append(buffer, n);
  const int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void cli_end_to_end() {
  const fs::path out = scratch("cli");
  std::string output;
  const int code = run_cli("run " + (kConfigs / "demo.json").string() + " --out " + out.string() +
                               " --jobs 4",
                           output);
  const auto text = slurp(out / "report.txt");
  const bool shape = code == 0 && text.find("No AI Support") != std::string::npos &&
                     text.find("\nAI Support") != std::string::npos &&
                     text.find("Overall Average") != std::string::npos;
  int logs = 0;
  int replayed = 0;
  if (code == 0) {
    for (const auto& e : fs::directory_iterator(out / "logs")) {
      ++logs;
      std::string r;
      if (run_cli("replay " + e.path().string(), r) == 0 &&
          r.find("events match, records match") != std::string::npos)
        ++replayed;
    }
  }
  fs::remove_all(out);
  std::ostringstream d;
  d << "run exit " << code << ", report sections " << (shape ? "present" : "missing") << ", "
    << replayed << "/" << logs << " logs replay to their trailers";
  report("cli end-to-end", shape && logs > 0 && replayed == logs, d.str());
}

}  // namespace

int main() {
  try {
    unit_examples();
    properties();
    oracle();
    determinism();
    directional();
    cli_end_to_end();
  } catch (const std::exception& e) {
    report("acceptance harness", false, e.what());
  }
  return failures == 0 ? 0 : 1;
}
