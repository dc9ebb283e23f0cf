#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "websuite/environment.hpp"

namespace websuite {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 = pick a free port
  /// Static files served under /ui/ (the browser frontend), when set.
  std::filesystem::path ui_dir;
};

/// HTTP front of an Environment:
///   POST /api/session {task_id}
///   GET  /api/page?session=&path=
///   POST /api/action {session, verb, target, payload}
///   GET  /api/result?session=
///   POST /api/log {session_id, ref_path, payload, client_ms}
///   GET  /api/tasks, GET /api/taxonomy
class Service {
 public:
  Service(Environment& env, ServiceOptions options);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds and serves on a background thread; returns the bound port.
  int start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace websuite
