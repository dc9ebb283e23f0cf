#include "websuite/agent.hpp"

#include <nlohmann/json.hpp>

namespace websuite {

nlohmann::json to_json(const Observation& observation) {
  auto page = to_json(observation.page);
  nlohmann::json j = {{"task_id", observation.task_id},
                      {"goal", observation.goal},
                      {"url", observation.page.path},
                      {"title", observation.page.title},
                      {"body_html", observation.page.body_html},
                      {"elements", page["elements"]},
                      {"step_index", observation.step_index},
                      {"remaining_ms", observation.remaining_ms}};
  if (!observation.last_error.empty()) j["last_error"] = observation.last_error;
  return j;
}

}  // namespace websuite
