#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "websuite/taxonomy.hpp"

namespace websuite {

/// One recorded interaction or navigation. The canonical text form holds only
/// `ref` and `payload`; seq, timing and element identity go to the sidecar.
struct LogEntry {
  std::int64_t seq = 0;
  std::int64_t at_ms = 0;
  InteractionRef ref;
  std::string payload;
  std::string element_id;

  bool is_nav() const { return ref.navigation; }
};

struct LogStream {
  std::string session_id;
  std::vector<LogEntry> entries;

  std::vector<std::string> lines() const;
  std::size_t interaction_count() const;  // non-nav entries
};

/// `<ref-path> // <payload>`
std::string format_line(const LogEntry& entry);

/// Inverse of format_line on (ref, payload). Throws Error{kMalformedLine}.
LogEntry parse_line(std::string_view line);

inline constexpr std::chrono::milliseconds kDefaultDebounce{500};

/// Collapses runs of adjacent type-action entries on the same element whose
/// successive gaps are below `window` into the run's last entry.
LogStream debounce_type_entries(const LogStream& stream,
                                std::chrono::milliseconds window =
                                    kDefaultDebounce);

/// Append-only per-session log files:
///   <root>/<dir>/<session_id>.log   canonical lines
///   <root>/<dir>/<session_id>.meta  one JSON record per entry (seq, at_ms)
///
/// Appends to one session are serialized; distinct sessions append
/// concurrently.
class LogStore {
 public:
  explicit LogStore(std::filesystem::path root);
  ~LogStore();

  LogStore(const LogStore&) = delete;
  LogStore& operator=(const LogStore&) = delete;

  const std::filesystem::path& root() const { return root_; }

  /// Creates (truncating) the session's files under `relative_dir`.
  void open_session(const std::string& session_id,
                    const std::filesystem::path& relative_dir);
  void close_session(const std::string& session_id);
  bool has_session(const std::string& session_id) const;

  /// Persists `entry` with the next seq (starting at 1) and returns it. The
  /// entry's `at_ms` is clamped so timestamps never decrease. Data is flushed
  /// to the file before returning. Throws Error{kUnknownSession}.
  std::int64_t append(const std::string& session_id, LogEntry entry);

  LogStream snapshot(const std::string& session_id) const;
  std::filesystem::path log_path(const std::string& session_id) const;

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& session_id) const;

  std::filesystem::path root_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Reads a `.log` file and its `.meta` sidecar back into a stream.
LogStream read_log_file(const std::filesystem::path& log_path);

}  // namespace websuite
