#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "websuite/agent.hpp"
#include "websuite/environment.hpp"
#include "websuite/logmodel.hpp"
#include "websuite/tasks.hpp"

namespace websuite {

enum class TrialOutcome { kSuccess, kFailure, kTimeout, kStopCondition, kAgentError };

std::string_view outcome_name(TrialOutcome outcome);
std::optional<TrialOutcome> outcome_from_name(std::string_view name);

struct TrialRecord {
  std::string task_id;
  int trial_index = 0;
  std::string session_id;
  TrialOutcome outcome = TrialOutcome::kFailure;
  std::int64_t wall_ms = 0;
  int steps = 0;
  std::string log_file;  // relative to the run directory
  std::string final_path;
  std::string error;  // agent error message, if any

  bool operator==(const TrialRecord&) const = default;
};

struct RunArchive {
  std::string run_id;
  AgentIdentity agent;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<std::string> task_ids;
  std::optional<std::int64_t> step_ms;  // virtual step cost for scripted agents
  std::vector<TrialRecord> records;     // task order, then trial index

  const TrialRecord* find(std::string_view task_id, int trial_index) const;
};

nlohmann::json to_json(const RunArchive& archive);
/// Throws Error{kMalformedArchive}.
RunArchive archive_from_json(const nlohmann::json& doc);

inline constexpr std::string_view kArchiveFile = "archive.json";

/// Reads `<run_dir>/archive.json`. Throws Error{kMalformedArchive}.
RunArchive load_archive(const std::filesystem::path& run_dir);
void save_archive(const std::filesystem::path& run_dir, const RunArchive& archive);

/// Reads the log stream a record points at.
LogStream load_trial_stream(const std::filesystem::path& run_dir,
                            const TrialRecord& record);

/// Which tasks `websuite run --suite` selects.
std::vector<std::string> select_tasks(const Suite& suite, std::string_view which);

struct RunConfig {
  std::vector<std::string> task_ids;  // empty = every task in the suite
  int trials = 8;
  std::uint64_t seed = 0;
  int parallel = 1;
  std::chrono::milliseconds step_cost{1000};  // virtual clock for scripted agents
};

/// Deterministic per-trial seed.
std::uint64_t trial_seed(std::uint64_t run_seed, std::string_view task_id, int trial_index);

/// Deterministic session id, e.g. "ind-click-button-3".
std::string trial_session_id(std::string_view task_id, int trial_index);

class Runner {
 public:
  /// Trials run in sessions of `env`, whose log store root is the run directory.
  explicit Runner(Environment& env);

  TrialRecord run_trial(const AgentFactory& factory, std::string_view task_id,
                        int trial_index, std::uint64_t seed,
                        std::chrono::milliseconds step_cost = std::chrono::milliseconds(1000));

  /// Runs every (task, trial) pair not already present in the run
  /// directory's archive and saves the archive after each trial.
  RunArchive run_suite(const AgentFactory& factory, const RunConfig& config);

 private:
  Environment& env_;
};

}  // namespace websuite
