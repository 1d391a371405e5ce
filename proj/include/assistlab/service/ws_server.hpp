#pragma once

#include "assistlab/service/trial_service.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

namespace assistlab {

struct ServerOptions {
  std::string bind{"127.0.0.1"};
  std::uint16_t port{8787};  // 0 picks a free port
  std::filesystem::path staticDir{"web/dist"};
  std::filesystem::path logDir{"sessions"};
};

// HTTP + WebSocket listener on one port. GET requests serve files from
// `staticDir`; upgrade requests on any path speak the trial protocol.
// Each connection runs on its own thread with its own TrialConnection.
class TrialServer {
 public:
  TrialServer(ServerOptions options, std::shared_ptr<const TrialCatalog> catalog);
  TrialServer(ServerOptions options, std::shared_ptr<const TrialCatalog> catalog, LogSink sink);
  ~TrialServer();

  TrialServer(const TrialServer&) = delete;
  TrialServer& operator=(const TrialServer&) = delete;

  /// Binds and starts accepting on a background thread.
  void start();
  /// Blocks until stop() is called from another thread or a signal handler.
  void wait();
  /// Closes the listener and every open connection.
  void stop();

  std::uint16_t port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace assistlab
