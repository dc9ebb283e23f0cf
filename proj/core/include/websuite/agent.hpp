#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "websuite/page.hpp"

namespace websuite {

/// What an agent sees before choosing its next command.
struct Observation {
  std::string task_id;
  std::string goal;
  PageDoc page;
  int step_index = 0;
  std::int64_t remaining_ms = 0;
  /// Message of the error raised by the previous command, if any.
  std::string last_error;
};

nlohmann::json to_json(const Observation& observation);

struct AgentIdentity {
  std::string name;
  std::string version;
};

/// One agent instance drives exactly one trial.
class Agent {
 public:
  virtual ~Agent() = default;
  /// Throws Error{kAgentError} when no valid command can be produced.
  virtual ActionCommand step(const Observation& observation) = 0;
};

class AgentFactory {
 public:
  virtual ~AgentFactory() = default;
  virtual AgentIdentity identity() const = 0;
  virtual std::unique_ptr<Agent> create(const std::string& task_id,
                                        std::uint64_t seed) const = 0;
  /// Scripted agents run on a virtual clock (a fixed cost per step) instead
  /// of wall time, which keeps their archives reproducible.
  virtual bool scripted() const { return false; }
};

/// Agent served over HTTP: each step POSTs the observation as JSON to
/// `endpoint` and expects `{verb, target, payload}` back.
std::unique_ptr<AgentFactory> make_remote_agent(
    std::string endpoint,
    std::chrono::milliseconds step_timeout = std::chrono::seconds(30));

}  // namespace websuite
