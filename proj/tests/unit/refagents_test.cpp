#include <gtest/gtest.h>

#include "support.hpp"
#include "websuite/errors.hpp"
#include "websuite/refagents.hpp"
#include "websuite/runner.hpp"

namespace websuite {
namespace {

using websuite::testing::TempDir;

std::vector<std::string> describe(const std::vector<PlanStep>& plan) {
  std::vector<std::string> out;
  for (const auto& s : plan) {
    out.push_back(std::string(verb_name(s.verb)) + " " + s.kind + " " + s.label + "=" + s.payload);
  }
  return out;
}

TEST(FaultNames, ParseAndPrint) {
  for (std::string name : {"nolink", "formabandon", "wrongfilter", "nodrag", "nohover",
                           "earlystop:0", "earlystop:3"}) {
    auto f = parse_fault(name);
    ASSERT_TRUE(f) << name;
    EXPECT_EQ(f->name(), name);
  }
  EXPECT_EQ(parse_fault("earlystop:2")->stop_after, 2);
  for (std::string bad : {"", "golden", "earlystop:", "earlystop:-1", "earlystop:x", "nolinks"}) {
    EXPECT_FALSE(parse_fault(bad)) << bad;
  }
}

TEST(BuiltinAgents, ResolveByName) {
  const auto& suite = builtin_suite();
  EXPECT_EQ(builtin_agent(suite, "golden")->identity().name, "golden");
  EXPECT_EQ(builtin_agent(suite, "nodrag")->identity().name, "nodrag");
  EXPECT_EQ(builtin_agent(suite, "earlystop:2")->identity().name, "earlystop:2");
  EXPECT_EQ(builtin_agent(suite, "natbot"), nullptr);
  EXPECT_TRUE(builtin_agent(suite, "golden")->scripted());
  auto names = builtin_agent_names();
  EXPECT_EQ(names.front(), "golden");
}

TEST(GoldenPlan, CoversEveryTask) {
  const auto& suite = builtin_suite();
  for (const auto& id : suite.task_ids()) {
    // The switch already off is solved by doing nothing.
    EXPECT_EQ(golden_plan(suite, id).empty(), id == "ind/click/switch-off") << id;
  }
  EXPECT_THROW(golden_plan(suite, "ind/nope"), Error);
}

TEST(GoldenPlan, ShapesOfKnownTasks) {
  const auto& suite = builtin_suite();
  auto slider = golden_plan(suite, "ind/click/slider-volume");
  ASSERT_EQ(slider.size(), 1u);
  EXPECT_EQ(slider[0].verb, Verb::kDrag);
  auto tooltip = golden_plan(suite, "ind/find/tooltip");
  EXPECT_EQ(tooltip.front().verb, Verb::kHover);
  ASSERT_EQ(tooltip.size(), 3u);
  EXPECT_FALSE(tooltip[1].payload_pattern.empty());
  EXPECT_EQ(tooltip[2].label, "Submit answer");
  auto order = golden_plan(suite, "e2e/order");
  int links = 0, fields = 0;
  for (const auto& s : order) {
    links += s.tag == PlanStep::Tag::kResultLink;
    fields += s.tag == PlanStep::Tag::kFormField;
  }
  EXPECT_EQ(links, 1);
  EXPECT_EQ(fields, 5);
}

TEST(FaultyPlan, EachFaultTouchesOnlyItsSteps) {
  const auto& suite = builtin_suite();
  auto filter = golden_plan(suite, "ind/filter/filterdatagrid");
  auto wrong = faulty_plan(filter, *parse_fault("wrongfilter"));
  EXPECT_EQ(wrong.size() + 1, filter.size());
  auto slider = golden_plan(suite, "ind/click/slider-volume");
  EXPECT_TRUE(faulty_plan(slider, *parse_fault("nodrag")).empty());
  auto tooltip = golden_plan(suite, "ind/find/tooltip");
  EXPECT_EQ(faulty_plan(tooltip, *parse_fault("nohover")).size() + 1, tooltip.size());

  auto form = golden_plan(suite, "ind/fill/complexform");
  auto abandoned = faulty_plan(form, *parse_fault("formabandon"));
  int fields = 0;
  for (const auto& s : abandoned) fields += s.tag == PlanStep::Tag::kFormField;
  EXPECT_EQ(fields, 1);

  // Faults that act at run time leave the plan alone.
  for (std::string name : {"nolink", "earlystop:1"}) {
    EXPECT_EQ(describe(faulty_plan(form, *parse_fault(name))), describe(form)) << name;
  }
  auto button = golden_plan(suite, "ind/click/button");
  for (std::string name : {"formabandon", "wrongfilter", "nodrag", "nohover"}) {
    EXPECT_EQ(describe(faulty_plan(button, *parse_fault(name))), describe(button)) << name;
  }
}

class RefAgentRunTest : public ::testing::Test {
 protected:
  TempDir dir;
  LogStore store{dir.path()};
  Environment env{builtin_suite(), store};
  Runner runner{env};
};

TEST_F(RefAgentRunTest, GoldenSolvesEveryTask) {
  auto golden = golden_policy(builtin_suite());
  int i = 0;
  for (const auto& id : builtin_suite().task_ids()) {
    auto r = runner.run_trial(*golden, id, i++, 7);
    EXPECT_EQ(r.outcome, TrialOutcome::kSuccess) << id << " " << r.error;
  }
}

TEST_F(RefAgentRunTest, NoLinkClicksTheCardAndStalls) {
  auto agent = inject(builtin_suite(), *parse_fault("nolink"));
  auto r = runner.run_trial(*agent, "e2e/order", 0, 7);
  EXPECT_NE(r.outcome, TrialOutcome::kSuccess);
  EXPECT_EQ(r.final_path.rfind("/search", 0), 0u) << r.final_path;
  EXPECT_EQ(runner.run_trial(*agent, "ind/click/link", 0, 7).outcome, TrialOutcome::kSuccess);
}

TEST_F(RefAgentRunTest, EarlyStopEndsAfterK) {
  auto agent = inject(builtin_suite(), *parse_fault("earlystop:1"));
  auto r = runner.run_trial(*agent, "ind/fill/basicform", 0, 7);
  EXPECT_EQ(r.steps, 1);
  EXPECT_NE(r.outcome, TrialOutcome::kSuccess);
  EXPECT_EQ(runner.run_trial(*agent, "ind/click/button", 0, 7).outcome, TrialOutcome::kSuccess);
}

TEST_F(RefAgentRunTest, RunsAreDeterministic) {
  auto agent = inject(builtin_suite(), *parse_fault("formabandon"));
  auto a = runner.run_trial(*agent, "e2e/order", 0, 11);
  TempDir other;
  LogStore store2{other.path()};
  Environment env2{builtin_suite(), store2};
  Runner runner2{env2};
  auto b = runner2.run_trial(*agent, "e2e/order", 0, 11);
  EXPECT_EQ(a, b);
  EXPECT_EQ(websuite::testing::read_file(dir.path() / a.log_file),
            websuite::testing::read_file(other.path() / b.log_file));
}

}  // namespace
}  // namespace websuite
