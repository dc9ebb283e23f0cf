#pragma once

// Runs a suite where each trial picks its own builtin agent, the way a real
// agent fails on some attempts and succeeds on others.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "websuite/attribution.hpp"
#include "websuite/environment.hpp"
#include "websuite/refagents.hpp"
#include "websuite/runner.hpp"

namespace websuite::testing {

/// task id -> one builtin agent name per trial. Tasks not listed run golden.
using AgentMix = std::map<std::string, std::vector<std::string>>;

inline RunArchive run_mix(const std::filesystem::path& dir, const std::string& run_id,
                          const std::vector<std::string>& task_ids, int trials,
                          const AgentMix& mix, std::uint64_t seed = 5) {
  const auto& suite = builtin_suite();
  LogStore store(dir);
  Environment env(suite, store);
  Runner runner(env);
  RunArchive archive;
  archive.run_id = run_id;
  archive.agent = {run_id, "mix"};
  archive.seed = seed;
  archive.trials = trials;
  archive.task_ids = task_ids;
  archive.step_ms = 1000;
  std::map<std::string, std::unique_ptr<AgentFactory>> agents;
  for (const auto& id : task_ids) {
    for (int i = 0; i < trials; ++i) {
      std::string name = "golden";
      if (auto it = mix.find(id); it != mix.end()) name = it->second.at(i);
      auto& agent = agents[name];
      if (!agent) agent = builtin_agent(suite, name);
      archive.records.push_back(
          runner.run_trial(*agent, id, i, trial_seed(seed, id, i)));
    }
  }
  return archive;
}

inline std::vector<std::string> repeat(const std::string& name, int n) {
  return std::vector<std::string>(n, name);
}

inline std::vector<std::string> concat(std::vector<std::string> a,
                                       const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Trial mixes that reproduce the reference agents' shopping results.
inline AgentMix seeact_shopping_mix() {
  return {{"e2e/order", repeat("nolink", 8)},
          {"e2e/add-to-cart", concat(repeat("nolink", 5), repeat("earlystop:1", 3))}};
}

inline AgentMix natbot_shopping_mix() {
  return {{"e2e/order", concat(repeat("formabandon", 7), repeat("golden", 1))},
          {"e2e/add-to-cart", repeat("golden", 8)}};
}

}  // namespace websuite::testing
