#include "websuite/environment.hpp"

#include <chrono>

#include "pages.hpp"
#include "websuite/errors.hpp"

namespace websuite {

namespace {

struct TaskBinding {
  const IndividualTask* individual = nullptr;
  const E2ETask* e2e = nullptr;

  const std::string& start_path() const {
    return individual ? individual->start_path : e2e->start_path;
  }
};

TaskBinding bind(const Suite& suite, std::string_view task_id) {
  TaskBinding b{suite.find_individual(task_id), suite.find_e2e(task_id)};
  if (!b.individual && !b.e2e) {
    throw Error(ErrorCode::kUnknownTask, std::string(task_id));
  }
  return b;
}

std::unique_ptr<pages::Site> make_site(const TaskBinding& b) {
  if (b.e2e) return pages::make_shop_site(b.e2e->cart_destination);
  auto site = pages::make_individual_site(b.individual->start_path);
  if (!site) {
    throw Error(ErrorCode::kUnknownTask, "no page for " + b.individual->start_path);
  }
  return site;
}

Url parse_path(std::string_view path) {
  auto url = Url::parse(path);
  if (!url) throw Error(ErrorCode::kNotFound, "invalid path '" + std::string(path) + "'");
  return *url;
}

const pages::Page& route(const pages::Site& site, const Url& url) {
  const auto* page = site.route(url);
  if (page == nullptr) throw Error(ErrorCode::kNotFound, url.str());
  return *page;
}

}  // namespace

struct Environment::Session {
  std::string id;
  TaskBinding task;
  std::unique_ptr<pages::Site> site;
  std::function<std::int64_t()> clock;

  std::mutex action_mutex;  // serializes apply_action
  mutable std::mutex state_mutex;
  Url url;
  bool done = false;
  bool closed = false;

  Url current() const {
    std::lock_guard lock(state_mutex);
    return url;
  }
};

Environment::Environment(const Suite& suite, LogStore& store)
    : suite_(suite), store_(store) {}

Environment::~Environment() = default;

SessionInfo Environment::create_session(std::string_view task_id,
                                        SessionOptions options) {
  auto binding = bind(suite_, task_id);
  auto session = std::make_shared<Session>();
  session->task = binding;
  session->site = make_site(binding);
  session->url = parse_path(binding.start_path());
  if (options.clock) {
    session->clock = std::move(options.clock);
  } else {
    auto start = std::chrono::steady_clock::now();
    session->clock = [start] {
      return std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::steady_clock::now() - start)
          .count();
    };
  }
  {
    std::unique_lock lock(mutex_);
    if (options.session_id.empty()) {
      do {
        options.session_id = "s" + std::to_string(next_id_++);
      } while (sessions_.count(options.session_id) != 0);
    }
    session->id = options.session_id;
    sessions_[session->id] = session;
  }
  auto dir = options.log_dir.empty() ? std::filesystem::path(std::string(task_id))
                                     : options.log_dir;
  store_.open_session(session->id, dir);
  return {session->id, binding.start_path()};
}

std::shared_ptr<Environment::Session> Environment::find(
    const std::string& session_id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::kUnknownSession, session_id);
  return it->second;
}

void Environment::close_session(const std::string& session_id) {
  auto session = find(session_id);
  std::lock_guard lock(session->state_mutex);
  if (!session->closed) {
    session->closed = true;
    store_.close_session(session_id);
  }
}

PageDoc Environment::render_page(const std::string& session_id,
                                 std::string_view path) const {
  auto session = find(session_id);
  auto url = parse_path(path);
  return route(*session->site, url).render(url);
}

PageDoc Environment::current_page(const std::string& session_id) const {
  auto session = find(session_id);
  auto url = session->current();
  return route(*session->site, url).render(url);
}

std::string Environment::current_path(const std::string& session_id) const {
  return find(session_id)->current().str();
}

std::string Environment::task_id(const std::string& session_id) const {
  auto session = find(session_id);
  return session->task.individual ? session->task.individual->id : session->task.e2e->id;
}

bool Environment::done(const std::string& session_id) const {
  auto session = find(session_id);
  std::lock_guard lock(session->state_mutex);
  return session->done;
}

ActionResult Environment::apply_action(const std::string& session_id,
                                       const ActionCommand& cmd) {
  auto session = find(session_id);
  std::unique_lock busy(session->action_mutex, std::try_to_lock);
  if (!busy.owns_lock()) {
    throw Error(ErrorCode::kBusy, "an action is already in progress for " + session_id);
  }
  {
    std::lock_guard lock(session->state_mutex);
    if (session->closed) throw Error(ErrorCode::kUnknownSession, session_id);
  }
  validate_command_shape(cmd);
  auto url = session->current();
  if (cmd.verb == Verb::kStop) return {url.str(), {}, session->done};

  pages::Outcome outcome;
  if (cmd.verb == Verb::kNavigate) {
    // Direct navigation only reaches the task's entry points; every later
    // page must be earned through interactions.
    auto target = parse_path(cmd.payload);
    bool allowed = target.str() == parse_path(session->task.start_path()).str() ||
                   (session->task.e2e && target.path() == "/search" &&
                    target.has("query"));
    if (!allowed || session->site->route(target) == nullptr) {
      throw Error(ErrorCode::kNotFound, "cannot navigate directly to " + cmd.payload);
    }
    outcome.url = target;
    outcome.navigated = true;
    outcome.entries.push_back(
        pages::log_entry("navigateurl/arbitrarypage", target.str()));
  } else {
    const auto& page = route(*session->site, url);
    auto doc = page.render(url);
    const auto* element = doc.find(cmd.target);
    if (element == nullptr) {
      throw Error(ErrorCode::kUnknownElement,
                  "no element '" + cmd.target + "' on " + url.str());
    }
    if (!verb_applies(cmd.verb, element->kind)) {
      throw Error(ErrorCode::kIncompatibleVerb,
                  std::string(verb_name(cmd.verb)) + " does not apply to " +
                      format_ref(element->kind) + " '" + element->element_id + "'");
    }
    outcome = cmd.verb == Verb::kHover ? page.hover(url, *element) : page.apply(url, cmd, *element);
  }

  ActionResult result;
  auto now = session->clock();
  for (auto& entry : outcome.entries) {
    entry.at_ms = now;
    entry.seq = store_.append(session_id, entry);
    result.emitted.push_back(entry);
  }
  if (outcome.navigated) {
    LogEntry nav;
    nav.ref = Taxonomy::instance().navigation();
    nav.payload = outcome.url.str();
    nav.at_ms = now;
    nav.seq = store_.append(session_id, nav);
    result.emitted.push_back(nav);
  }
  bool reached_final = session->task.e2e &&
                       outcome.url.path() == session->task.e2e->verifier.path;
  std::lock_guard lock(session->state_mutex);
  session->url = outcome.url;
  if (outcome.navigated && reached_final) session->done = true;
  result.new_path = outcome.url.str();
  result.done = session->done;
  return result;
}

std::int64_t Environment::ingest_log(const std::string& session_id,
                                     std::string_view ref_path, std::string payload,
                                     std::int64_t client_ms) {
  find(session_id);
  LogEntry entry;
  try {
    entry.ref = parse_ref(ref_path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedLine, e.what());
  }
  entry.payload = std::move(payload);
  entry.at_ms = client_ms;
  return store_.append(session_id, std::move(entry));
}

FinalState Environment::final_state(const std::string& session_id) const {
  auto session = find(session_id);
  auto url = session->current();
  const auto& page = route(*session->site, url);
  FinalState state;
  state.path = url.str();
  for (const auto& e : page.render(url).elements) {
    state.element_states[e.element_id] = e.state;
  }
  state.submitted = page.submitted(url);
  return state;
}

LogStream Environment::stream(const std::string& session_id) const {
  find(session_id);
  return store_.snapshot(session_id);
}

PageDoc Environment::render(const Suite& suite, std::string_view task_id,
                            std::string_view path) {
  auto site = make_site(bind(suite, task_id));
  auto url = parse_path(path);
  return route(*site, url).render(url);
}

}  // namespace websuite
