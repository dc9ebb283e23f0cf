#include <gtest/gtest.h>

#include "agent_mix.hpp"
#include "fixtures.hpp"
#include "support.hpp"

namespace websuite {
namespace {

using namespace websuite::testing;

const std::vector<std::string> kShopping{"e2e/order", "e2e/add-to-cart"};

class ShoppingTables : public ::testing::TestWithParam<bool> {
 protected:
  TempDir dir;
};

TEST_P(ShoppingTables, MixedRunReproducesReferenceAgent) {
  bool natbot = GetParam();
  auto mix = natbot ? natbot_shopping_mix() : seeact_shopping_mix();
  auto archive = run_mix(dir.path(), "mix", kShopping, 8, mix);
  auto report = attribute(builtin_suite(), archive, dir.path());
  auto expected = reference_report(natbot);

  ASSERT_EQ(report.e2e_tasks.size(), expected.e2e_tasks.size());
  for (std::size_t t = 0; t < expected.e2e_tasks.size(); ++t) {
    EXPECT_EQ(report.e2e_tasks[t], expected.e2e_tasks[t]) << expected.e2e_tasks[t].task_id;
  }
  for (const auto& leaf : expected.e2e_leaves) {
    auto it = std::find_if(report.e2e_leaves.begin(), report.e2e_leaves.end(),
                           [&](const InteractionStat& s) { return s.ref == leaf.ref; });
    if (leaf.instances == 0) {
      EXPECT_TRUE(it == report.e2e_leaves.end() || it->instances == 0) << format_ref(leaf.ref);
      continue;
    }
    ASSERT_NE(it, report.e2e_leaves.end()) << format_ref(leaf.ref);
    EXPECT_EQ(*it, leaf) << format_ref(leaf.ref);
  }
  EXPECT_EQ(report.e2e, expected.e2e);
}

INSTANTIATE_TEST_SUITE_P(Agents, ShoppingTables, ::testing::Values(true, false),
                         [](const auto& info) { return info.param ? "natbot" : "SeeAct"; });

TEST(IndividualTables, SingleFaultsHitOnlyTheirInteraction) {
  TempDir dir;
  const auto& suite = builtin_suite();
  std::vector<std::string> ids;
  for (const auto& t : suite.individual) ids.push_back(t.id);
  AgentMix mix;
  for (const auto& id : ids) mix[id] = repeat("nohover", 2);
  auto report = attribute(suite, run_mix(dir.path(), "nohover", ids, 2, mix), dir.path());
  for (const auto& row : report.individual.interactions) {
    EXPECT_DOUBLE_EQ(*row.rate, row.key == "find/tooltip" ? 0.0 : 1.0) << row.key;
  }
  EXPECT_EQ(report.individual.find("click/slider")->count, 8);
  EXPECT_EQ(report.individual.find("Click")->count, 18);
}

}  // namespace
}  // namespace websuite
