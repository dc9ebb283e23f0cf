#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "websuite/agent.hpp"
#include "websuite/page.hpp"
#include "websuite/tasks.hpp"

namespace websuite {

/// One step of a scripted plan: act on the element of `kind` labelled `label`.
struct PlanStep {
  enum class Tag { kNone, kResultLink, kFormField, kFormSubmit, kFilterColumn };

  Verb verb = Verb::kClick;
  std::string kind;   // ref path of the target element
  std::string label;
  std::string payload;
  /// When set, the payload is the first capture of this regex over the
  /// current page's HTML (reading an answer off the page).
  std::string payload_pattern;
  Tag tag = Tag::kNone;
};

/// The minimal correct action sequence for a task.
std::vector<PlanStep> golden_plan(const Suite& suite, std::string_view task_id);

struct FaultSpec {
  enum class Kind { kNoLinkClick, kFormAbandon, kWrongFilterColumn, kNoDrag, kNoHover, kEarlyStop };
  Kind kind = Kind::kNoLinkClick;
  int stop_after = 0;  // kEarlyStop only

  std::string name() const;
};

/// Accepts the builtin agent names: nolink, formabandon, wrongfilter, nodrag,
/// nohover, earlystop:k.
std::optional<FaultSpec> parse_fault(std::string_view name);

/// The golden plan with `fault` applied.
std::vector<PlanStep> faulty_plan(std::vector<PlanStep> plan, const FaultSpec& fault);

std::unique_ptr<AgentFactory> golden_policy(const Suite& suite);
std::unique_ptr<AgentFactory> inject(const Suite& suite, const FaultSpec& fault);

/// `golden` or a fault name; nullptr for anything else.
std::unique_ptr<AgentFactory> builtin_agent(const Suite& suite, std::string_view name);

std::vector<std::string> builtin_agent_names();

}  // namespace websuite
