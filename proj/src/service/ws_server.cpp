#include "assistlab/service/ws_server.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <condition_variable>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace assistlab {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr const char* kPlaceholderPage =
    "<!doctype html><html><head><title>assistlab trial service</title></head><body>"
    "<h1>assistlab trial service</h1><p>The browser UI bundle was not found. Build it into the "
    "static directory (default <code>web/dist</code>) or pass <code>--static-dir</code>. The "
    "WebSocket endpoint is available on this port (protocol v1).</p></body></html>";

std::string content_type(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".html") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  return "application/octet-stream";
}

}  // namespace

struct TrialServer::Impl {
  ServerOptions options;
  std::shared_ptr<const TrialCatalog> catalog;
  LogSink sink;

  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::uint16_t boundPort{0};
  std::thread acceptThread;

  std::mutex mutex;
  std::condition_variable stoppedSignal;
  std::atomic<bool> stopping{false};
  bool stopped{false};
  std::set<std::shared_ptr<tcp::socket>> sockets;
  std::vector<std::thread> connections;

  void accept_loop() {
    while (!stopping) {
      auto socket = std::make_shared<tcp::socket>(ioc);
      beast::error_code ec;
      acceptor.accept(*socket, ec);
      if (stopping) break;
      if (ec) continue;
      std::lock_guard lock(mutex);
      sockets.insert(socket);
      connections.emplace_back([this, socket] {
        serve(*socket);
        std::lock_guard inner(mutex);
        sockets.erase(socket);
      });
    }
  }

  void serve(tcp::socket& socket) {
    beast::error_code ec;
    beast::flat_buffer buffer;
    http::request<http::string_body> request;
    http::read(socket, buffer, request, ec);
    if (ec) return;

    if (websocket::is_upgrade(request)) {
      serve_websocket(socket, request);
    } else {
      serve_static(socket, request);
    }
  }

  void serve_websocket(tcp::socket& socket, const http::request<http::string_body>& request) {
    websocket::stream<tcp::socket&> ws(socket);
    TrialConnection connection(catalog, sink);
    beast::error_code ec;
    ws.accept(request, ec);
    if (ec) return;
    ws.text(true);
    for (;;) {
      beast::flat_buffer buffer;
      ws.read(buffer, ec);
      if (ec) break;
      const auto replies = connection.handle_message(beast::buffers_to_string(buffer.data()));
      for (const auto& reply : replies) {
        ws.write(net::buffer(reply), ec);
        if (ec) break;
      }
      if (ec) break;
    }
    connection.on_disconnect();
  }

  void serve_static(tcp::socket& socket, const http::request<http::string_body>& request) {
    http::response<http::string_body> response;
    response.version(request.version());
    response.keep_alive(false);
    response.set(http::field::server, "assistlab");

    std::string target(request.target());
    if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
    if (target.empty() || target == "/") target = "/index.html";

    const bool safe = target.front() == '/' && target.find("..") == std::string::npos;
    const auto path = options.staticDir / target.substr(1);
    if (request.method() != http::verb::get) {
      response.result(http::status::method_not_allowed);
      response.body() = "method not allowed\n";
    } else if (safe && std::filesystem::is_regular_file(path)) {
      std::ifstream in(path, std::ios::binary);
      std::ostringstream body;
      body << in.rdbuf();
      response.result(http::status::ok);
      response.set(http::field::content_type, content_type(path));
      response.body() = body.str();
    } else if (target == "/index.html") {
      response.result(http::status::ok);
      response.set(http::field::content_type, "text/html; charset=utf-8");
      response.body() = kPlaceholderPage;
    } else {
      response.result(http::status::not_found);
      response.body() = "not found\n";
    }
    response.prepare_payload();
    beast::error_code ec;
    http::write(socket, response, ec);
    socket.shutdown(tcp::socket::shutdown_send, ec);
  }
};

TrialServer::TrialServer(ServerOptions options, std::shared_ptr<const TrialCatalog> catalog)
    : TrialServer(options, catalog, directory_log_sink(options.logDir)) {}

TrialServer::TrialServer(ServerOptions options, std::shared_ptr<const TrialCatalog> catalog,
                         LogSink sink)
    : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  impl_->catalog = std::move(catalog);
  impl_->sink = std::move(sink);
}

TrialServer::~TrialServer() { stop(); }

void TrialServer::start() {
  auto& impl = *impl_;
  const tcp::endpoint endpoint(net::ip::make_address(impl.options.bind), impl.options.port);
  impl.acceptor.open(endpoint.protocol());
  impl.acceptor.set_option(net::socket_base::reuse_address(true));
  impl.acceptor.bind(endpoint);
  impl.acceptor.listen();
  impl.boundPort = impl.acceptor.local_endpoint().port();
  impl.acceptThread = std::thread([&impl] { impl.accept_loop(); });
}

void TrialServer::wait() {
  std::unique_lock lock(impl_->mutex);
  impl_->stoppedSignal.wait(lock, [this] { return impl_->stopped; });
}

void TrialServer::stop() {
  auto& impl = *impl_;
  if (impl.stopping.exchange(true)) return;

  if (impl.acceptThread.joinable()) {
    // A blocking accept() is not woken by close(); poke it with a connection.
    beast::error_code ec;
    tcp::socket poke(impl.ioc);
    poke.connect({net::ip::make_address(impl.options.bind), impl.boundPort}, ec);
    impl.acceptThread.join();
  }
  beast::error_code ec;
  impl.acceptor.close(ec);

  std::vector<std::thread> connections;
  {
    std::lock_guard lock(impl.mutex);
    for (const auto& socket : impl.sockets) socket->shutdown(tcp::socket::shutdown_both, ec);
    connections.swap(impl.connections);
  }
  for (auto& t : connections) t.join();

  std::lock_guard lock(impl.mutex);
  impl.stopped = true;
  impl.stoppedSignal.notify_all();
}

std::uint16_t TrialServer::port() const { return impl_->boundPort; }

}  // namespace assistlab
