#include "websuite/logmodel.hpp"

#include <cstdio>
#include <fstream>
#include <mutex>

#include <nlohmann/json.hpp>

#include "websuite/errors.hpp"

namespace websuite {

namespace {

constexpr std::string_view kSeparator = " // ";

bool is_type_entry(const LogEntry& e) {
  return !e.ref.navigation && e.ref.action == "Type";
}

std::string_view debounce_key(const LogEntry& e) {
  if (!e.element_id.empty()) return e.element_id;
  std::string_view payload = e.payload;
  return payload.substr(0, payload.find('='));
}

}  // namespace

std::vector<std::string> LogStream::lines() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(format_line(e));
  return out;
}

std::size_t LogStream::interaction_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.is_nav() ? 0 : 1;
  return n;
}

std::string format_line(const LogEntry& entry) {
  std::string out = format_ref(entry.ref);
  out += kSeparator;
  out += entry.payload;
  return out;
}

LogEntry parse_line(std::string_view line) {
  auto pos = line.find(kSeparator);
  if (pos == std::string_view::npos) {
    throw Error(ErrorCode::kMalformedLine,
                "missing ' // ' separator: '" + std::string(line) + "'");
  }
  LogEntry entry;
  try {
    entry.ref = parse_ref(line.substr(0, pos));
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedLine, e.what());
  }
  entry.payload = std::string(line.substr(pos + kSeparator.size()));
  if (entry.payload.find('\n') != std::string::npos) {
    throw Error(ErrorCode::kMalformedLine, "payload contains a newline");
  }
  return entry;
}

LogStream debounce_type_entries(const LogStream& stream,
                                std::chrono::milliseconds window) {
  LogStream out{stream.session_id, {}};
  out.entries.reserve(stream.entries.size());
  for (const auto& e : stream.entries) {
    if (!out.entries.empty()) {
      auto& prev = out.entries.back();
      if (is_type_entry(prev) && is_type_entry(e) && prev.ref == e.ref &&
          debounce_key(prev) == debounce_key(e) &&
          e.at_ms - prev.at_ms < window.count()) {
        prev = e;
        continue;
      }
    }
    out.entries.push_back(e);
  }
  return out;
}

struct LogStore::Session {
  std::mutex mutex;
  std::filesystem::path log_path;
  std::FILE* log = nullptr;
  std::FILE* meta = nullptr;
  std::int64_t next_seq = 1;
  std::int64_t last_at = 0;
  LogStream stream;
  bool closed = false;

  void close() {
    if (log) std::fclose(log);
    if (meta) std::fclose(meta);
    log = meta = nullptr;
    closed = true;
  }
  ~Session() { close(); }
};

LogStore::LogStore(std::filesystem::path root) : root_(std::move(root)) {}

LogStore::~LogStore() = default;

void LogStore::open_session(const std::string& session_id,
                            const std::filesystem::path& relative_dir) {
  auto dir = root_ / relative_dir;
  std::filesystem::create_directories(dir);
  auto session = std::make_shared<Session>();
  session->log_path = dir / (session_id + ".log");
  auto meta_path = dir / (session_id + ".meta");
  session->log = std::fopen(session->log_path.c_str(), "wb");
  session->meta = std::fopen(meta_path.c_str(), "wb");
  if (!session->log || !session->meta) {
    throw std::runtime_error("cannot create log files under " + dir.string());
  }
  session->stream.session_id = session_id;
  std::unique_lock lock(mutex_);
  sessions_[session_id] = std::move(session);
}

std::shared_ptr<LogStore::Session> LogStore::find(
    const std::string& session_id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kUnknownSession, session_id);
  }
  return it->second;
}

void LogStore::close_session(const std::string& session_id) {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  session->close();
}

bool LogStore::has_session(const std::string& session_id) const {
  std::shared_lock lock(mutex_);
  return sessions_.count(session_id) > 0;
}

std::int64_t LogStore::append(const std::string& session_id, LogEntry entry) {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  if (session->closed) throw Error(ErrorCode::kUnknownSession, session_id);
  if (entry.payload.find('\n') != std::string::npos) {
    throw Error(ErrorCode::kMalformedLine, "payload contains a newline");
  }
  entry.seq = session->next_seq++;
  entry.at_ms = std::max(entry.at_ms, session->last_at);
  session->last_at = entry.at_ms;

  auto line = format_line(entry);
  line.push_back('\n');
  nlohmann::json meta = {{"seq", entry.seq}, {"at_ms", entry.at_ms}};
  if (!entry.element_id.empty()) meta["element"] = entry.element_id;
  auto meta_line = meta.dump() + "\n";
  std::fwrite(line.data(), 1, line.size(), session->log);
  std::fwrite(meta_line.data(), 1, meta_line.size(), session->meta);
  std::fflush(session->log);
  std::fflush(session->meta);

  session->stream.entries.push_back(std::move(entry));
  return session->stream.entries.back().seq;
}

LogStream LogStore::snapshot(const std::string& session_id) const {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  return session->stream;
}

std::filesystem::path LogStore::log_path(const std::string& session_id) const {
  return find(session_id)->log_path;
}

LogStream read_log_file(const std::filesystem::path& log_path) {
  LogStream stream;
  stream.session_id = log_path.stem().string();
  std::ifstream log(log_path);
  if (!log) throw Error(ErrorCode::kMalformedArchive, "missing " + log_path.string());
  auto meta_path = log_path;
  meta_path.replace_extension(".meta");
  std::ifstream meta(meta_path);

  std::string line;
  std::int64_t seq = 0;
  while (std::getline(log, line)) {
    auto entry = parse_line(line);
    entry.seq = ++seq;
    std::string meta_line;
    if (meta && std::getline(meta, meta_line)) {
      auto m = nlohmann::json::parse(meta_line, nullptr, false);
      if (m.is_object()) {
        entry.seq = m.value("seq", entry.seq);
        entry.at_ms = m.value("at_ms", std::int64_t{0});
        entry.element_id = m.value("element", std::string{});
      }
    }
    stream.entries.push_back(std::move(entry));
  }
  return stream;
}

}  // namespace websuite
