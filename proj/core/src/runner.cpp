#include "websuite/runner.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

#include "websuite/errors.hpp"

namespace websuite {

namespace {

constexpr std::pair<TrialOutcome, std::string_view> kOutcomeNames[] = {
    {TrialOutcome::kSuccess, "success"},
    {TrialOutcome::kFailure, "failure"},
    {TrialOutcome::kTimeout, "timeout"},
    {TrialOutcome::kStopCondition, "stop_condition"},
    {TrialOutcome::kAgentError, "agent_error"},
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Keeps entries up to and including the `limit`-th interaction entry.
LogStream truncate_interactions(const LogStream& stream, std::size_t limit) {
  LogStream out{stream.session_id, {}};
  std::size_t seen = 0;
  for (const auto& e : stream.entries) {
    if (!e.is_nav()) {
      if (seen == limit) break;
      ++seen;
    }
    out.entries.push_back(e);
  }
  return out;
}

}  // namespace

std::string_view outcome_name(TrialOutcome outcome) {
  for (const auto& [o, name] : kOutcomeNames) {
    if (o == outcome) return name;
  }
  return "failure";
}

std::optional<TrialOutcome> outcome_from_name(std::string_view name) {
  for (const auto& [o, n] : kOutcomeNames) {
    if (n == name) return o;
  }
  return std::nullopt;
}

std::uint64_t trial_seed(std::uint64_t run_seed, std::string_view task_id,
                         int trial_index) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : task_id) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return splitmix64(run_seed ^ splitmix64(h + static_cast<std::uint64_t>(trial_index)));
}

std::string trial_session_id(std::string_view task_id, int trial_index) {
  std::string out;
  for (char c : task_id) {
    bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                (c >= '0' && c <= '9') || c == '-' || c == '_';
    out.push_back(keep ? c : '-');
  }
  return out + "-" + std::to_string(trial_index);
}

std::vector<std::string> select_tasks(const Suite& suite, std::string_view which) {
  std::vector<std::string> ids;
  if (which == "individual" || which == "all") {
    for (const auto& t : suite.individual) ids.push_back(t.id);
  }
  if (which == "e2e" || which == "all") {
    for (const auto& t : suite.e2e) ids.push_back(t.id);
  }
  if (ids.empty()) {
    if (!suite.contains(which)) {
      throw Error(ErrorCode::kUnknownTask, "unknown suite or task '" + std::string(which) + "'");
    }
    ids.emplace_back(which);
  }
  return ids;
}

Runner::Runner(Environment& env) : env_(env) {}

TrialRecord Runner::run_trial(const AgentFactory& factory, std::string_view task_id,
                              int trial_index, std::uint64_t seed,
                              std::chrono::milliseconds step_cost) {
  const auto& suite = env_.suite();
  const auto* individual = suite.find_individual(task_id);
  const auto* e2e = suite.find_e2e(task_id);
  if (!individual && !e2e) throw Error(ErrorCode::kUnknownTask, std::string(task_id));
  const auto& constraints = individual ? individual->constraints : e2e->constraints;
  const auto& goal = individual ? individual->goal : e2e->goal;
  const std::int64_t limit_ms = constraints.time_limit_s * 1000LL;

  bool scripted = factory.scripted();
  auto virtual_ms = std::make_shared<std::int64_t>(0);
  auto wall_start = std::chrono::steady_clock::now();
  auto elapsed = [&]() -> std::int64_t {
    if (scripted) return *virtual_ms;
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - wall_start)
        .count();
  };

  TrialRecord record;
  record.task_id = std::string(task_id);
  record.trial_index = trial_index;
  record.session_id = trial_session_id(task_id, trial_index);
  auto relative_dir = std::filesystem::path(record.task_id) / std::to_string(trial_index);
  record.log_file = (relative_dir / (record.session_id + ".log")).generic_string();

  SessionOptions options;
  options.session_id = record.session_id;
  options.log_dir = relative_dir;
  if (scripted) {
    options.clock = [virtual_ms] { return *virtual_ms; };
  }
  env_.create_session(task_id, options);

  auto agent = factory.create(record.task_id, seed);
  std::optional<TrialOutcome> exit_reason;
  Observation obs;
  obs.task_id = record.task_id;
  obs.goal = goal;
  std::size_t interactions = 0;

  while (!exit_reason) {
    if (env_.done(record.session_id)) {
      exit_reason = TrialOutcome::kFailure;  // auto-exit on the final page
      break;
    }
    if (constraints.max_logs &&
        interactions >= static_cast<std::size_t>(*constraints.max_logs)) {
      exit_reason = TrialOutcome::kStopCondition;
      break;
    }
    if (elapsed() >= limit_ms) {
      exit_reason = TrialOutcome::kTimeout;
      break;
    }
    obs.page = env_.current_page(record.session_id);
    obs.step_index = record.steps;
    obs.remaining_ms = limit_ms - elapsed();
    ActionCommand cmd;
    try {
      cmd = agent->step(obs);
    } catch (const std::exception& e) {
      record.error = e.what();
      exit_reason = TrialOutcome::kAgentError;
      break;
    }
    if (scripted) *virtual_ms += step_cost.count();
    obs.last_error.clear();
    if (cmd.verb == Verb::kStop) {
      exit_reason = TrialOutcome::kFailure;
      break;
    }
    ++record.steps;
    try {
      auto result = env_.apply_action(record.session_id, cmd);
      for (const auto& e : result.emitted) interactions += e.is_nav() ? 0 : 1;
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::kUnknownElement:
        case ErrorCode::kIncompatibleVerb:
        case ErrorCode::kNotFound:
          obs.last_error = e.what();
          break;
        default:
          throw;
      }
    }
  }

  record.wall_ms = elapsed();
  record.final_path = env_.current_path(record.session_id);
  auto stream = env_.stream(record.session_id);
  env_.close_session(record.session_id);

  bool success = false;
  if (individual) {
    auto checked = debounce_type_entries(stream);
    if (constraints.max_logs) {
      checked = truncate_interactions(checked, static_cast<std::size_t>(*constraints.max_logs));
    }
    success = check_individual(*individual, checked, env_.final_state(record.session_id));
  } else {
    success = verify_e2e(*e2e, stream);
  }
  record.outcome = success ? TrialOutcome::kSuccess : *exit_reason;
  return record;
}

RunArchive Runner::run_suite(const AgentFactory& factory, const RunConfig& config) {
  const auto& run_dir = env_.store().root();
  auto identity = factory.identity();

  RunArchive archive;
  archive.run_id = "run-" + identity.name + "-" + std::to_string(config.seed);
  archive.agent = identity;
  archive.seed = config.seed;
  archive.trials = config.trials;
  archive.task_ids = config.task_ids.empty() ? env_.suite().task_ids() : config.task_ids;
  if (factory.scripted()) archive.step_ms = config.step_cost.count();
  for (const auto& id : archive.task_ids) {
    if (!env_.suite().contains(id)) throw Error(ErrorCode::kUnknownTask, id);
  }

  // Resume: keep records of an interrupted run with the same identity.
  if (std::filesystem::exists(run_dir / kArchiveFile)) {
    auto previous = load_archive(run_dir);
    if (previous.run_id == archive.run_id && previous.agent.version == identity.version &&
        previous.task_ids == archive.task_ids && previous.trials == archive.trials &&
        previous.step_ms == archive.step_ms) {
      archive.records = std::move(previous.records);
    }
  }

  std::deque<std::pair<std::string, int>> pending;
  for (const auto& id : archive.task_ids) {
    for (int t = 0; t < config.trials; ++t) {
      if (!archive.find(id, t)) pending.emplace_back(id, t);
    }
  }

  std::map<std::string, std::size_t> task_order;
  for (std::size_t i = 0; i < archive.task_ids.size(); ++i) task_order[archive.task_ids[i]] = i;
  auto sort_records = [&] {
    std::sort(archive.records.begin(), archive.records.end(),
              [&](const TrialRecord& a, const TrialRecord& b) {
                return std::pair(task_order[a.task_id], a.trial_index) <
                       std::pair(task_order[b.task_id], b.trial_index);
              });
  };
  sort_records();
  save_archive(run_dir, archive);

  std::mutex mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      std::pair<std::string, int> job;
      {
        std::lock_guard lock(mutex);
        if (pending.empty() || failure) return;
        job = pending.front();
        pending.pop_front();
      }
      try {
        auto record = run_trial(factory, job.first, job.second,
                                trial_seed(config.seed, job.first, job.second),
                                config.step_cost);
        std::lock_guard lock(mutex);
        archive.records.push_back(std::move(record));
        sort_records();
        save_archive(run_dir, archive);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  int threads = std::max(1, config.parallel);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return archive;
}

}  // namespace websuite
