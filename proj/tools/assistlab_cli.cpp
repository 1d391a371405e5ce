// assistlab: batch experiment runner, log replay/report and the live trial service.
//
//   assistlab run <config> --out <dir> [--jobs N] [--paper-literal-averages]
//   assistlab replay <log> [--paper-literal-averages]
//   assistlab report <dir> [--paper-literal-averages]
//   assistlab serve [--bind ADDR] [--port N] [--static-dir DIR] [--log-dir DIR]
//
// Exit codes: 0 ok, 2 config error, 3 runtime error.

#include "assistlab/experiment/experiment.hpp"
#include "assistlab/service/ws_server.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

using namespace assistlab;

void print_summary(std::ostream& out, const char* heading, const ModeSummary& s) {
  out << heading << ": " << to_string(s.mode) << " n=" << s.n << " successes=" << s.successes
      << " success=" << format_percent(s.successPct) << " time=" << format_time_metric(s) << '\n';
}

int cmd_run(const std::string& configPath, const std::string& outDir, int jobs, bool literal) {
  ExperimentConfig config;
  try {
    config = load_config(configPath);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const auto result = run_experiment(config, outDir, jobs, {literal});
    std::size_t logs = 0;
    for (const auto& cell : result.cells) logs += cell.logs.size();
    std::cout << to_text(result.report) << '\n'
              << "wrote " << logs << " session logs and report.csv/report.txt to " << outDir << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_replay(const std::string& logPath, bool literal) {
  try {
    const SessionLog log = read_log(std::filesystem::path(logPath));
    const ReplayResult replay = replay_log(log);
    const MetricsOptions options{literal};
    print_summary(std::cout, "trailer ", compute_summary(log.records, options));
    print_summary(std::cout, "replayed", compute_summary(replay.records, options));
    std::cout << "events " << (replay.eventsMatch ? "match" : "DIFFER") << ", records "
              << (replay.recordsMatch ? "match" : "DIFFER") << '\n';
    return replay.eventsMatch && replay.recordsMatch ? kExitOk : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_report(const std::string& dir, bool literal) {
  try {
    const auto result = report_directory(dir, {literal});
    const std::filesystem::path out(dir);
    std::ofstream(out / "report.csv", std::ios::binary) << to_csv(result.report);
    std::ofstream(out / "report.txt", std::ios::binary) << to_text(result.report);
    std::cout << to_text(result.report);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_serve(const ServerOptions& options) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    TrialServer server(options, std::make_shared<const TrialCatalog>(default_catalog()));
    server.start();
    std::cout << "trial service listening on http://" << options.bind << ':' << server.port()
              << " (WebSocket protocol " << kProtocolVersion << "), logs in " << options.logDir
              << std::endl;
    int received = 0;
    sigwait(&signals, &received);
    std::cout << "shutting down" << std::endl;
    server.stop();
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"assistlab - input assistance experiments"};
  app.require_subcommand(1);

  bool literal = false;
  std::string configPath;
  std::string outDir;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "run every profile x assist x task cell of a config");
  run->add_option("config", configPath, "experiment config (JSON)")->required();
  run->add_option("--out", outDir, "output directory (must not exist or be empty)")->required();
  run->add_option("--jobs", jobs, "parallel sessions")->check(CLI::PositiveNumber);
  run->add_flag("--paper-literal-averages", literal, "divide averages by n instead of successes");

  std::string logPath;
  auto* replay = app.add_subcommand("replay", "re-simulate a session log and check its trailer");
  replay->add_option("log", logPath, "session log (.session.jsonl)")->required();
  replay->add_flag("--paper-literal-averages", literal, "divide averages by n instead of successes");

  std::string reportDir;
  auto* report = app.add_subcommand("report", "rebuild report.csv/report.txt from a run directory");
  report->add_option("dir", reportDir, "output directory of a previous run")->required();
  report->add_flag("--paper-literal-averages", literal, "divide averages by n instead of successes");

  ServerOptions serverOptions;
  std::string staticDir = serverOptions.staticDir.string();
  std::string logDir = serverOptions.logDir.string();
  auto* serve = app.add_subcommand("serve", "run the live trial service");
  serve->add_option("--bind", serverOptions.bind, "bind address");
  serve->add_option("--port", serverOptions.port, "port (0 picks a free one)");
  serve->add_option("--static-dir", staticDir, "directory holding the browser UI bundle");
  serve->add_option("--log-dir", logDir, "where finished live sessions are written");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(configPath, outDir, jobs, literal);
  if (*replay) return cmd_replay(logPath, literal);
  if (*report) return cmd_report(reportDir, literal);
  serverOptions.staticDir = staticDir;
  serverOptions.logDir = logDir;
  return cmd_serve(serverOptions);
}
