#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "websuite/logmodel.hpp"
#include "websuite/runner.hpp"
#include "websuite/tasks.hpp"
#include "websuite/taxonomy.hpp"

namespace websuite {

// --- statistics ----------------------------------------------------------------

inline constexpr double kWaldZ = 1.96;

/// Half-width of the Wald interval in whole percentage points; nullopt when
/// n == 0.
std::optional<int> wald_ci(int successes, int n, double z = kWaldZ);
std::optional<int> wald_ci_rate(double rate, int n, double z = kWaldZ);

/// Percent with at most two decimals, rounded half away from zero, trailing
/// zeros dropped: 0.8515625 -> "85.16%", 1.0 -> "100%", 0.125 -> "12.5%".
std::string format_percent(double rate);

// --- segmentation and checkpoint scoring ----------------------------------------

struct Segment {
  std::optional<std::size_t> checkpoint;  // index into task.checkpoints; nullopt = preamble
  std::vector<LogEntry> entries;
  std::size_t start = 0;  // index of the first entry in the stream
};

/// Splits a stream where a navigation lands on a checkpoint page. Navigations
/// to other pages stay in the current segment.
std::vector<Segment> segment_by_checkpoints(const E2ETask& task, const LogStream& stream);

struct GoldenResult {
  bool matched = false;
  std::optional<std::size_t> entry;  // index into the stream
};

struct CheckpointScore {
  bool reached = false;
  bool completed = false;
  std::vector<GoldenResult> goldens;
};

struct ScoredInstance {
  InteractionRef ref;
  bool success = false;
};

struct TrialScore {
  std::vector<CheckpointScore> checkpoints;
  std::vector<ScoredInstance> instances;
  std::vector<LogEntry> extras;  // interaction entries no golden accounted for
  bool verified = false;
};

/// Scores one finished E2E trial. Goldens are matched order-insensitively
/// against the union of a checkpoint's segments, each log entry serving at
/// most one golden.
TrialScore score_trial(const E2ETask& task, const LogStream& stream);

// --- aggregation -------------------------------------------------------------------

/// One printed row: a rate, its parenthetical count and optional interval.
struct RateRow {
  std::string key;      // ref path, action name or category name
  std::string display;  // name as printed in tables
  std::optional<double> rate;  // fraction; nullopt = not encountered
  int count = 0;               // trials (individual) or instances (E2E)
  std::optional<int> ci;       // Wald half-width in points

  bool operator==(const RateRow&) const = default;
};

struct LevelTable {
  std::vector<RateRow> interactions;
  std::vector<RateRow> actions;
  std::vector<RateRow> categories;

  const RateRow* find(std::string_view key) const;
  bool operator==(const LevelTable&) const = default;
};

/// An interaction's individual-task result: the mean of its task rates.
struct InteractionRate {
  InteractionRef ref;
  double rate = 0;
  int trials = 0;  // summed over the interaction's tasks
  int tasks = 1;
};

/// Equal-interaction weighting: action = mean of its interactions' rates,
/// category = mean of all descendant interactions' rates. An interaction's
/// trial count contributes trials / tasks to action and category counts.
LevelTable aggregate_individual(const std::vector<InteractionRate>& rates);

struct InteractionStat {
  InteractionRef ref;
  int successes = 0;
  int instances = 0;

  bool operator==(const InteractionStat&) const = default;
};

/// Instance pooling: every level's rate is sum(successes) / sum(instances).
LevelTable aggregate_e2e(const std::vector<InteractionStat>& stats);

// --- reports -----------------------------------------------------------------------

struct TaskStat {
  std::string task_id;
  std::string interaction;  // ref path
  int successes = 0;
  int trials = 0;

  bool operator==(const TaskStat&) const = default;
};

struct CheckpointStat {
  std::string id;
  std::string label;
  int completed = 0;
  int reached = 0;

  std::optional<double> rate() const;
  bool operator==(const CheckpointStat&) const = default;
};

struct E2ETaskStat {
  std::string task_id;
  int successes = 0;
  int trials = 0;
  std::vector<CheckpointStat> checkpoints;

  bool operator==(const E2ETaskStat&) const = default;
};

struct ExtraStat {
  std::string task_id;
  std::string ref;
  int count = 0;

  bool operator==(const ExtraStat&) const = default;
};

struct AttributionReport {
  std::string run_id;
  std::string agent;
  std::vector<TaskStat> individual_tasks;
  LevelTable individual;
  std::vector<E2ETaskStat> e2e_tasks;
  std::vector<InteractionStat> e2e_leaves;
  LevelTable e2e;
  std::vector<ExtraStat> extras;

  bool operator==(const AttributionReport&) const = default;
};

std::vector<InteractionRate> interaction_rates(const std::vector<TaskStat>& tasks);

/// Builds the report from the leaf data, computing every aggregate.
AttributionReport make_report(std::string run_id, std::string agent,
                              std::vector<TaskStat> individual_tasks,
                              std::vector<E2ETaskStat> e2e_tasks,
                              std::vector<InteractionStat> e2e_leaves,
                              std::vector<ExtraStat> extras = {});

/// Reads every trial's log back from `run_dir` and attributes it.
AttributionReport attribute_run(const Suite& suite, const std::filesystem::path& run_dir);
AttributionReport attribute(const Suite& suite, const RunArchive& archive,
                            const std::filesystem::path& run_dir);

}  // namespace websuite
