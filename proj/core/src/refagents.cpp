#include "websuite/refagents.hpp"

#include <charconv>
#include <map>
#include <regex>

#include "websuite/catalog.hpp"
#include "websuite/errors.hpp"

namespace websuite {

namespace {

using Tag = PlanStep::Tag;

PlanStep click(std::string kind, std::string label, Tag tag = Tag::kNone) {
  return {Verb::kClick, std::move(kind), std::move(label), {}, {}, tag};
}

PlanStep type(std::string kind, std::string label, std::string value, Tag tag = Tag::kNone) {
  return {Verb::kType, std::move(kind), std::move(label), std::move(value), {}, tag};
}

PlanStep choose(std::string label, std::string option, Tag tag = Tag::kNone) {
  return {Verb::kSelect, "select/select", std::move(label), std::move(option), {}, tag};
}

PlanStep drag(std::string label, std::string value) {
  return {Verb::kDrag, "click/slider", std::move(label), std::move(value), {}, Tag::kNone};
}

PlanStep hover(std::string kind, std::string label) {
  return {Verb::kHover, std::move(kind), std::move(label), {}, {}, Tag::kNone};
}

PlanStep answer(std::string pattern) {
  PlanStep s = type("type/text", "Answer", {});
  s.payload_pattern = std::move(pattern);
  return s;
}

const std::map<std::string, std::vector<PlanStep>, std::less<>>& individual_plans() {
  static const std::map<std::string, std::vector<PlanStep>, std::less<>> kPlans = {
      {"ind/click/accordion", {click("click/accordion", "Shipping details")}},
      {"ind/click/button", {click("click/button", "Submit")}},
      {"ind/click/dialogbutton", {click("click/dialogbutton", "Delete")}},
      {"ind/click/dropdownmenu",
       {click("click/dropdownmenu", "Options"), click("click/dropdownmenu", "Duplicate")}},
      {"ind/click/iconbutton", {click("click/iconbutton", "Favorite")}},
      {"ind/click/link", {click("click/link", "About us")}},
      {"ind/click/slider-volume", {drag("volume", "80")}},
      {"ind/click/slider-brightness", {drag("brightness", "100")}},
      {"ind/click/slider-temperature", {drag("temperature", "68")}},
      {"ind/click/slider-zoom", {drag("zoom", "25")}},
      {"ind/click/snackbar", {click("click/snackbar", "Undo")}},
      {"ind/click/switch", {click("click/switch", "Do not disturb")}},
      {"ind/click/switch-off", {}},
      {"ind/type/date", {type("type/date", "Birth date", "1990-05-17")}},
      {"ind/type/phone", {type("type/phone", "Phone number", "617-555-0123")}},
      {"ind/type/text", {type("type/text", "Name", "John Doe")}},
      {"ind/select/checkbox", {click("select/checkbox", "I accept the terms and conditions")}},
      {"ind/select/datagridrow", {click("select/datagridrow", "Order 1003")}},
      {"ind/select/multicheck",
       {click("select/multicheck", "Apples"), click("select/multicheck", "Cherries")}},
      {"ind/select/select", {choose("Country", "Canada")}},
      {"ind/navigatemenu/basicmenu", {click("navigatemenu/basicmenu", "Settings")}},
      {"ind/navigatemenu/nestedmenu",
       {click("navigatemenu/nestedmenu", "Account"), click("navigatemenu/nestedmenu", "Privacy")}},
      {"ind/find/accordion",
       {click("click/accordion", "Returns"), answer(R"(within (\d+) days)"),
        click("click/button", "Submit answer")}},
      {"ind/find/dialogbutton",
       {click("click/dialogbutton", "View plan details"), answer(R"(\$(\d+) per month)"),
        click("click/button", "Submit answer")}},
      {"ind/find/paragraphs",
       {answer(R"(founded in (\d{4}))"), click("click/button", "Submit answer")}},
      {"ind/find/tooltip",
       {hover("click/iconbutton", "Storage details"), answer(R"(includes (\d+) GB)"),
        click("click/button", "Submit answer")}},
      {"ind/filter/filterdatagrid",
       {choose("Filter column", "Country", Tag::kFilterColumn),
        type("type/text", "Filter value", "USA")}},
      {"ind/filter/sortdatagrid",
       {click("click/button", "Sort by Total"), click("click/button", "Sort by Total")}},
      {"ind/fill/basicform",
       {type("type/text", "Name", "Jane Smith", Tag::kFormField),
        type("type/text", "Email", "jane@example.com", Tag::kFormField),
        click("click/button", "Submit", Tag::kFormSubmit)}},
      {"ind/fill/complexform",
       {type("type/text", "Full name", "Alex Kim", Tag::kFormField),
        type("type/phone", "Phone", "617-555-0199", Tag::kFormField),
        type("type/date", "Birth date", "1985-11-02", Tag::kFormField),
        choose("Country", "Canada", Tag::kFormField),
        click("select/checkbox", "Subscribe to newsletter", Tag::kFormField),
        click("click/button", "Submit", Tag::kFormSubmit)}},
  };
  return kPlans;
}

std::vector<PlanStep> e2e_plan(const E2ETask& task) {
  const auto* item = find_item(task.goal_item_id);
  std::vector<PlanStep> plan = {type("type/text", "Search", item->name),
                                click("click/iconbutton", "Search"),
                                click("click/link", item->name, Tag::kResultLink)};
  if (task.cart_destination == "/cart") {
    auto top = highest_tier_cart(*item);
    for (const auto& g : item->groups) {
      plan.push_back(click("click/button", g.label + " " + top.options.at(g.name)));
    }
    plan.push_back(click("click/button", "Add to cart"));
    return plan;
  }
  plan.push_back(click("click/button", "Add to cart"));
  auto address = order_shipping_address();
  for (const auto& [label, value] : {std::pair{"Name", address.name},
                                     std::pair{"Street", address.street},
                                     std::pair{"City", address.city},
                                     std::pair{"State", address.state},
                                     std::pair{"Zip", address.zip}}) {
    plan.push_back(type("type/text", label, value, Tag::kFormField));
  }
  plan.push_back(click("click/button", "Place order", Tag::kFormSubmit));
  return plan;
}

class ScriptedAgent : public Agent {
 public:
  ScriptedAgent(std::vector<PlanStep> plan, std::optional<FaultSpec> fault)
      : plan_(std::move(plan)), fault_(fault) {}

  ActionCommand step(const Observation& obs) override {
    if (!obs.last_error.empty() || next_ >= plan_.size()) return {Verb::kStop, {}, {}};
    if (fault_ && fault_->kind == FaultSpec::Kind::kEarlyStop &&
        obs.step_index >= fault_->stop_after) {
      return {Verb::kStop, {}, {}};
    }
    const auto& s = plan_[next_++];
    const ElementManifest* target = nullptr;
    for (const auto& e : obs.page.elements) {
      if (format_ref(e.kind) == s.kind && e.label == s.label) {
        target = &e;
        break;
      }
    }
    if (target == nullptr) return {Verb::kStop, {}, {}};

    if (s.tag == Tag::kResultLink && fault_ && fault_->kind == FaultSpec::Kind::kNoLinkClick) {
      // Aim at the result card wrapping the link instead of the link itself.
      constexpr std::string_view kPrefix = "result-link-";
      auto card = "card-" + target->element_id.substr(kPrefix.size());
      if (obs.page.body_html.find("id=\"" + card + "\"") != std::string::npos) {
        return {Verb::kClick, card, {}};
      }
    }
    ActionCommand cmd{s.verb, target->element_id, s.payload};
    if (!s.payload_pattern.empty()) {
      std::smatch m;
      if (!std::regex_search(obs.page.body_html, m, std::regex(s.payload_pattern))) {
        return {Verb::kStop, {}, {}};
      }
      cmd.payload = m[1].str();
    }
    return cmd;
  }

 private:
  std::vector<PlanStep> plan_;
  std::optional<FaultSpec> fault_;
  std::size_t next_ = 0;
};

class ScriptedFactory : public AgentFactory {
 public:
  ScriptedFactory(const Suite& suite, std::optional<FaultSpec> fault)
      : suite_(suite), fault_(fault) {}

  AgentIdentity identity() const override {
    return {fault_ ? fault_->name() : "golden", "1"};
  }

  std::unique_ptr<Agent> create(const std::string& task_id, std::uint64_t) const override {
    auto plan = golden_plan(suite_, task_id);
    if (fault_) plan = faulty_plan(std::move(plan), *fault_);
    return std::make_unique<ScriptedAgent>(std::move(plan), fault_);
  }

  bool scripted() const override { return true; }

 private:
  const Suite& suite_;
  std::optional<FaultSpec> fault_;
};

}  // namespace

std::vector<PlanStep> golden_plan(const Suite& suite, std::string_view task_id) {
  if (const auto* e2e = suite.find_e2e(task_id)) return e2e_plan(*e2e);
  auto it = individual_plans().find(task_id);
  if (it == individual_plans().end() || !suite.find_individual(task_id)) {
    throw Error(ErrorCode::kUnknownTask, std::string(task_id));
  }
  return it->second;
}

std::string FaultSpec::name() const {
  switch (kind) {
    case Kind::kNoLinkClick: return "nolink";
    case Kind::kFormAbandon: return "formabandon";
    case Kind::kWrongFilterColumn: return "wrongfilter";
    case Kind::kNoDrag: return "nodrag";
    case Kind::kNoHover: return "nohover";
    case Kind::kEarlyStop: return "earlystop:" + std::to_string(stop_after);
  }
  return "";
}

std::optional<FaultSpec> parse_fault(std::string_view name) {
  using K = FaultSpec::Kind;
  if (name == "nolink") return FaultSpec{K::kNoLinkClick, 0};
  if (name == "formabandon") return FaultSpec{K::kFormAbandon, 0};
  if (name == "wrongfilter") return FaultSpec{K::kWrongFilterColumn, 0};
  if (name == "nodrag") return FaultSpec{K::kNoDrag, 0};
  if (name == "nohover") return FaultSpec{K::kNoHover, 0};
  constexpr std::string_view kEarly = "earlystop:";
  if (name.starts_with(kEarly)) {
    auto digits = name.substr(kEarly.size());
    int k = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && p == digits.data() + digits.size() && k >= 0 && !digits.empty()) {
      return FaultSpec{K::kEarlyStop, k};
    }
  }
  return std::nullopt;
}

std::vector<PlanStep> faulty_plan(std::vector<PlanStep> plan, const FaultSpec& fault) {
  using K = FaultSpec::Kind;
  std::vector<PlanStep> out;
  bool kept_field = false;
  for (auto& s : plan) {
    switch (fault.kind) {
      case K::kFormAbandon:
        if (s.tag == Tag::kFormField) {
          if (kept_field) continue;
          kept_field = true;
        }
        break;
      case K::kWrongFilterColumn:
        if (s.tag == Tag::kFilterColumn) continue;
        break;
      case K::kNoDrag:
        if (s.verb == Verb::kDrag) continue;
        break;
      case K::kNoHover:
        if (s.verb == Verb::kHover) continue;
        break;
      case K::kNoLinkClick:  // applied while acting
      case K::kEarlyStop:
        break;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::unique_ptr<AgentFactory> golden_policy(const Suite& suite) {
  return std::make_unique<ScriptedFactory>(suite, std::nullopt);
}

std::unique_ptr<AgentFactory> inject(const Suite& suite, const FaultSpec& fault) {
  return std::make_unique<ScriptedFactory>(suite, fault);
}

std::unique_ptr<AgentFactory> builtin_agent(const Suite& suite, std::string_view name) {
  if (name == "golden") return golden_policy(suite);
  if (auto fault = parse_fault(name)) return inject(suite, *fault);
  return nullptr;
}

std::vector<std::string> builtin_agent_names() {
  return {"golden", "nolink", "formabandon", "wrongfilter", "nodrag", "nohover", "earlystop:k"};
}

}  // namespace websuite
