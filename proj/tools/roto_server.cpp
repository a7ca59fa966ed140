#include <filesystem>
#include <iostream>
#include <mutex>

#include "CLI11.hpp"
#include "roto/http_api.hpp"
// After Eigen: <resolv.h> defines a _res macro that collides with Eigen.
#include "httplib.h"

int main(int argc, char** argv) {
  CLI::App app{"Live draft assistant HTTP service"};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string snapshot;
  app.add_option("--host", host, "Address to bind")->capture_default_str();
  app.add_option("--port", port, "Port to listen on (0 picks a free port)")
      ->capture_default_str()
      ->check(CLI::Range(0, 65535));
  app.add_option("--snapshot", snapshot,
                 "JSON file restored at startup (if present) and rewritten after each change");
  CLI11_PARSE(app, argc, argv);

  roto::DraftService service;
  std::mutex snapshot_mutex;
  try {
    if (!snapshot.empty() && std::filesystem::exists(snapshot)) {
      service.load_snapshot(snapshot);
      std::cerr << "restored " << service.ids().size() << " drafts from " << snapshot << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  httplib::Server server;
  roto::register_routes(server, service, [&] {
    if (snapshot.empty()) {
      return;
    }
    std::lock_guard lock(snapshot_mutex);
    try {
      service.save_snapshot(snapshot);
    } catch (const std::exception& e) {
      std::cerr << "snapshot failed: " << e.what() << "\n";
    }
  });

  const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << host << ":" << port << "\n";
    return 2;
  }
  std::cout << "listening on http://" << host << ":" << bound << std::endl;
  return server.listen_after_bind() ? 0 : 2;
}
