#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <thread>

#include "focusloop/service.hpp"

namespace focusloop {

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8080;  // 0 picks a free port
  std::chrono::milliseconds pump_interval{50};
  ServiceOptions service;
};

// HTTP + WebSocket front end for a SessionManager.
//
//   GET  /health
//   POST /sessions                     body: SessionConfig JSON -> {"session", "state"}
//   GET  /sessions/{h}                 status
//   POST /sessions/{h}/start
//   POST /sessions/{h}/input           body: one client message
//   POST /sessions/{h}/abort           -> partial report
//   GET  /sessions/{h}/report
//   GET  /sessions/{h}/stream?from_seq=N   WebSocket upgrade
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Bound port (useful when the options asked for port 0).
  unsigned short port() const;
  SessionManager& sessions();

  // Blocks until stop() is called from another thread or a signal handler.
  void run();
  void start_background();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace focusloop
