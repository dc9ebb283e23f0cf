#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "websuite/logmodel.hpp"
#include "websuite/page.hpp"
#include "websuite/tasks.hpp"

namespace websuite {

struct SessionInfo {
  std::string session_id;
  std::string start_path;
};

struct SessionOptions {
  /// Generated ("s1", "s2", ...) when empty.
  std::string session_id;
  /// Log directory relative to the store root; defaults to the task id.
  std::filesystem::path log_dir;
  /// Milliseconds since session start. Defaults to a steady clock.
  std::function<std::int64_t()> clock;
};

struct ActionResult {
  std::string new_path;
  std::vector<LogEntry> emitted;
  bool done = false;
};

/// Serves task pages and applies agent actions. All page state is carried by
/// the session's current path, so rendering is a pure function of
/// (task, path).
class Environment {
 public:
  Environment(const Suite& suite, LogStore& store);
  ~Environment();

  Environment(const Environment&) = delete;
  Environment& operator=(const Environment&) = delete;

  const Suite& suite() const { return suite_; }
  LogStore& store() { return store_; }

  /// Throws Error{kUnknownTask}.
  SessionInfo create_session(std::string_view task_id, SessionOptions options = {});
  void close_session(const std::string& session_id);

  /// Throws Error{kUnknownSession} or Error{kNotFound}.
  PageDoc render_page(const std::string& session_id, std::string_view path) const;
  PageDoc current_page(const std::string& session_id) const;
  std::string current_path(const std::string& session_id) const;
  std::string task_id(const std::string& session_id) const;
  bool done(const std::string& session_id) const;

  /// Throws Error{kUnknownElement}, Error{kIncompatibleVerb},
  /// Error{kNotFound}, Error{kBusy} or Error{kUnknownSession}.
  ActionResult apply_action(const std::string& session_id, const ActionCommand& cmd);

  /// Appends an externally produced entry (the browser frontend's log hook).
  std::int64_t ingest_log(const std::string& session_id, std::string_view ref_path,
                          std::string payload, std::int64_t client_ms);

  FinalState final_state(const std::string& session_id) const;
  LogStream stream(const std::string& session_id) const;

  /// Renders `path` for `task_id` without a session.
  static PageDoc render(const Suite& suite, std::string_view task_id,
                        std::string_view path);

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& session_id) const;

  const Suite& suite_;
  LogStore& store_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace websuite
