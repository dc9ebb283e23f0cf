#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "websuite/attribution.hpp"

namespace websuite {
namespace {

using namespace websuite::testing;

const E2ETask& order() { return *builtin_suite().find_e2e("e2e/order"); }
const E2ETask& add_to_cart() { return *builtin_suite().find_e2e("e2e/add-to-cart"); }

std::map<std::string, std::pair<int, int>> tally(const TrialScore& score) {
  std::map<std::string, std::pair<int, int>> out;
  for (const auto& i : score.instances) {
    auto& [s, n] = out[format_ref(i.ref)];
    s += i.success ? 1 : 0;
    ++n;
  }
  return out;
}

TEST(Wald, PrintedIntervals) {
  EXPECT_EQ(wald_ci(2, 8), 30);
  EXPECT_EQ(wald_ci(1, 8), 23);
  EXPECT_EQ(wald_ci(7, 8), 23);
  EXPECT_EQ(wald_ci(0, 8), 0);
  EXPECT_EQ(wald_ci(8, 8), 0);
  EXPECT_FALSE(wald_ci(0, 0));
  EXPECT_EQ(wald_ci_rate(0.25, 8), 30);
  EXPECT_EQ(wald_ci(1, 2, 1.0), 35);
}

TEST(FormatPercent, TrimsTrailingZeros) {
  EXPECT_EQ(format_percent(0.8515625), "85.16%");
  EXPECT_EQ(format_percent(1.0), "100%");
  EXPECT_EQ(format_percent(0.125), "12.5%");
  EXPECT_EQ(format_percent(0.0), "0%");
  EXPECT_EQ(format_percent(13.0 / 29.0), "44.83%");
  EXPECT_EQ(format_percent(0.40625), "40.63%");
  EXPECT_EQ(format_percent(0.34375), "34.38%");
  EXPECT_EQ(format_percent(2.0 / 3.0), "66.67%");
}

TEST(Segments, NavsToCheckpointPagesOpenSegments) {
  auto stream = make_stream(prefix_lines(order_lines(), 4));
  auto segs = segment_by_checkpoints(order(), stream);
  ASSERT_EQ(segs.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(segs[k].checkpoint, k);
  EXPECT_EQ(segs[0].entries.size(), 2u);
  EXPECT_EQ(segs[1].entries.front().payload, "/search?query=MacBook%20Pro%20M3");
  // The /thanks navigation is not a checkpoint page and stays in the last segment.
  EXPECT_TRUE(segs[3].entries.back().is_nav());
  std::size_t total = 0;
  for (const auto& s : segs) total += s.entries.size();
  EXPECT_EQ(total, stream.entries.size());
}

TEST(Segments, NoNavsGiveOneSegment) {
  auto segs = segment_by_checkpoints(order(), make_stream({"click/button // Whatever"}));
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].entries.size(), 1u);
}

TEST(Segments, RevisitOpensAnotherSegment) {
  auto lines = prefix_lines(order_lines(), 2);
  lines.push_back("nav // /search?query=MacBook%20Pro%20M3");
  lines.push_back("nav // /item?id=mbp-m3");
  auto segs = segment_by_checkpoints(order(), make_stream(lines));
  ASSERT_EQ(segs.size(), 5u);
  EXPECT_EQ(segs[3].checkpoint, 1u);
  EXPECT_EQ(segs[4].checkpoint, 2u);
}

TEST(ScoreTrial, GoldenOrderTrial) {
  auto score = score_trial(order(), make_stream(prefix_lines(order_lines(), 4)));
  EXPECT_TRUE(score.verified);
  for (const auto& c : score.checkpoints) {
    EXPECT_TRUE(c.reached);
    EXPECT_TRUE(c.completed);
  }
  auto t = tally(score);
  EXPECT_EQ(t["type/text"], std::make_pair(1, 1));
  EXPECT_EQ(t["click/iconbutton"], std::make_pair(1, 1));
  EXPECT_EQ(t["click/link"], std::make_pair(1, 1));
  EXPECT_EQ(t["search/selectresult"], std::make_pair(1, 1));
  EXPECT_EQ(t["click/button"], std::make_pair(1, 1));
  EXPECT_EQ(t["fill/complexform"], std::make_pair(1, 1));
  EXPECT_EQ(t.size(), 6u);
  EXPECT_TRUE(score.extras.empty());
}

TEST(ScoreTrial, ContainerClickFailsLinkAndSelectResult) {
  auto lines = prefix_lines(order_lines(), 1);
  auto score = score_trial(order(), make_stream(lines));
  EXPECT_TRUE(score.checkpoints[0].completed);
  EXPECT_TRUE(score.checkpoints[1].reached);
  EXPECT_FALSE(score.checkpoints[1].completed);
  EXPECT_FALSE(score.checkpoints[2].reached);
  EXPECT_FALSE(score.checkpoints[3].reached);
  auto t = tally(score);
  EXPECT_EQ(t["click/link"], std::make_pair(0, 1));
  EXPECT_EQ(t["search/selectresult"], std::make_pair(0, 1));
  EXPECT_EQ(t.count("click/button"), 0u);
  EXPECT_FALSE(score.verified);
}

TEST(ScoreTrial, AbandonedShippingFailsOnlyTheForm) {
  auto cps = order_lines();
  auto lines = prefix_lines(cps, 3);
  lines.push_back(cps[3].work[0]);
  lines.push_back("click/button // Place order");
  auto score = score_trial(order(), make_stream(lines));
  auto t = tally(score);
  EXPECT_EQ(t["fill/complexform"], std::make_pair(0, 1));
  EXPECT_EQ(t["click/button"], std::make_pair(1, 1));
  EXPECT_EQ(t["click/link"], std::make_pair(1, 1));
  // Override soundness: the form's primitive type/text entries are never scored.
  EXPECT_EQ(t["type/text"], std::make_pair(1, 1));
  EXPECT_TRUE(score.checkpoints[3].reached);
  EXPECT_FALSE(score.checkpoints[3].completed);
}

TEST(ScoreTrial, OverrideScoresOneInstanceWhenCompleted) {
  auto score = score_trial(add_to_cart(), make_stream(prefix_lines(add_to_cart_lines(), 3)));
  auto t = tally(score);
  EXPECT_EQ(t["fill/basicform"], std::make_pair(1, 1));
  EXPECT_EQ(t.count("click/button"), 0u);
  EXPECT_TRUE(score.verified);
  EXPECT_TRUE(score.extras.empty());
}

TEST(ScoreTrial, UnreachedCheckpointsContributeNothing) {
  auto score = score_trial(order(), make_stream({"type/text // Search=MacBook Pro M3"}));
  EXPECT_TRUE(score.checkpoints[0].reached);
  EXPECT_FALSE(score.checkpoints[0].completed);
  auto t = tally(score);
  EXPECT_EQ(t["type/text"], std::make_pair(1, 1));
  EXPECT_EQ(t["click/iconbutton"], std::make_pair(0, 1));
  EXPECT_EQ(t.size(), 2u);
}

TEST(ScoreTrial, GoldensMatchOrderInsensitively) {
  auto cps = order_lines();
  auto lines = prefix_lines(cps, 4);
  std::swap(lines[0], lines[1]);
  auto score = score_trial(order(), make_stream(lines));
  EXPECT_TRUE(score.checkpoints[0].completed);
}

TEST(ScoreTrial, EachEntryServesOneGolden) {
  // Two goldens on the customize page share no entries: a single option
  // click cannot satisfy both option goldens.
  auto cps = add_to_cart_lines();
  auto lines = prefix_lines(cps, 2);
  lines.push_back("click/button // Memory 64GB");
  lines.push_back("click/button // Add to cart");
  lines.push_back(cart_nav("/cart", default_cart(*find_item(kAddToCartItemId))));
  auto score = score_trial(add_to_cart(), make_stream(lines));
  EXPECT_FALSE(score.checkpoints[2].completed);
  EXPECT_EQ(tally(score)["fill/basicform"], std::make_pair(0, 1));
}

TEST(ScoreTrial, RevisitedCheckpointUsesUnionOfSegments) {
  auto cps = order_lines();
  auto lines = prefix_lines(cps, 2);           // link clicked on first visit
  lines.push_back("nav // /search?query=MacBook%20Pro%20M3");  // back to results
  lines.push_back("nav // /item?id=mbp-m3");
  lines.insert(lines.end(), cps[2].work.begin(), cps[2].work.end());
  lines.push_back(cps[2].exit);
  auto score = score_trial(order(), make_stream(lines));
  auto t = tally(score);
  EXPECT_EQ(t["click/link"], std::make_pair(1, 1));
  EXPECT_TRUE(score.checkpoints[2].completed);
}

TEST(ScoreTrial, ExtrasAreRecordedWithoutPenalty) {
  auto lines = prefix_lines(order_lines(), 4);
  lines.insert(lines.begin() + 3, "click/button // Compare");  // on the results page
  auto score = score_trial(order(), make_stream(lines));
  ASSERT_EQ(score.extras.size(), 1u);
  EXPECT_EQ(score.extras[0].payload, "Compare");
  EXPECT_TRUE(score.checkpoints[1].completed);
  EXPECT_TRUE(score.verified);
}

TEST(ScoreTrial, WrongItemIsReachedButNotCompleted) {
  auto lines = prefix_lines(order_lines(), 1);
  lines.push_back("click/link // MacBook Pro M3 Max");
  lines.push_back("nav // /item?id=mbp-m3-max");
  auto score = score_trial(order(), make_stream(lines));
  EXPECT_FALSE(score.checkpoints[1].completed);
  EXPECT_TRUE(score.checkpoints[2].reached);
  EXPECT_FALSE(score.checkpoints[2].completed);
  auto t = tally(score);
  EXPECT_EQ(t["click/link"], std::make_pair(0, 1));
  EXPECT_EQ(t["click/button"], std::make_pair(0, 1));
}

TEST(ScoreTrial, TypingIsDebouncedBeforeScoring) {
  auto cps = order_lines();
  auto lines = prefix_lines(cps, 4);
  lines.insert(lines.begin(), "type/text // Search=Mac");
  auto stream = make_stream(lines);
  stream.entries[1].at_ms = stream.entries[0].at_ms + 100;
  auto score = score_trial(order(), stream);
  EXPECT_TRUE(score.extras.empty());
  EXPECT_EQ(tally(score)["type/text"], std::make_pair(1, 1));
}

InteractionRate rate(std::string_view ref, double r, int trials = 8, int tasks = 1) {
  return {parse_ref(ref), r, trials, tasks};
}

TEST(AggregateIndividual, NatbotClick) {
  std::vector<InteractionRate> rates{
      rate("click/accordion", 1),    rate("click/button", 1), rate("click/dialogbutton", 1),
      rate("click/dropdownmenu", 1), rate("click/iconbutton", 1), rate("click/link", 1),
      rate("click/slider", 0, 32, 4), rate("click/snackbar", 0.125), rate("click/switch", 0.5)};
  auto t = aggregate_individual(rates);
  const auto* click = t.find("Click");
  ASSERT_NE(click, nullptr);
  EXPECT_NEAR(*click->rate * 100, 73.61, 0.01);
  EXPECT_EQ(click->count, 72);
  EXPECT_EQ(t.find("click/slider")->count, 32);
  EXPECT_EQ(t.find("Operational")->count, 72);
  EXPECT_FALSE(t.find("Navigational"));
}

TEST(AggregateIndividual, SeeActSelect) {
  std::vector<InteractionRate> rates{rate("select/checkbox", 1), rate("select/datagridrow", 0.9375),
                                     rate("select/multicheck", 0.875), rate("select/select", 0)};
  auto t = aggregate_individual(rates);
  EXPECT_EQ(format_percent(*t.find("Select")->rate), "70.31%");
}

TEST(AggregateIndividual, CategoryAveragesInteractionsNotActions) {
  std::vector<InteractionRate> rates{rate("click/button", 1), rate("click/link", 1),
                                     rate("type/text", 0)};
  auto t = aggregate_individual(rates);
  EXPECT_NEAR(*t.find("Operational")->rate, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(*t.find("Type")->rate, 0.0, 1e-12);
}

TEST(AggregateIndividual, InteractionRateIsMeanOfTaskRates) {
  std::vector<TaskStat> tasks{{"ind/click/slider-volume", "click/slider", 8, 8},
                              {"ind/click/slider-zoom", "click/slider", 0, 8},
                              {"ind/click/slider-brightness", "click/slider", 4, 8},
                              {"ind/click/slider-temperature", "click/slider", 0, 8}};
  auto rates = interaction_rates(tasks);
  ASSERT_EQ(rates.size(), 1u);
  EXPECT_DOUBLE_EQ(rates[0].rate, 0.375);
  EXPECT_EQ(rates[0].trials, 32);
  EXPECT_EQ(rates[0].tasks, 4);
}

InteractionStat stat(std::string_view ref, int s, int n) { return {parse_ref(ref), s, n}; }

TEST(AggregateE2E, SeeActPooling) {
  std::vector<InteractionStat> leaves{stat("click/button", 0, 0), stat("click/iconbutton", 13, 16),
                                      stat("click/link", 0, 13), stat("type/text", 16, 16),
                                      stat("search/selectresult", 0, 13)};
  auto t = aggregate_e2e(leaves);
  EXPECT_EQ(format_percent(*t.find("Click")->rate), "44.83%");
  EXPECT_EQ(t.find("Click")->count, 29);
  EXPECT_EQ(format_percent(*t.find("Operational")->rate), "64.44%");
  EXPECT_EQ(t.find("Operational")->count, 45);
  EXPECT_FALSE(t.find("click/button")->rate);
  EXPECT_EQ(t.find("click/button")->count, 0);
}

TEST(AggregateE2E, PoolingAndEqualWeightingDiverge) {
  std::vector<InteractionStat> leaves{stat("fill/basicform", 8, 8), stat("fill/complexform", 1, 8),
                                      stat("search/selectresult", 16, 16)};
  auto pooled = aggregate_e2e(leaves);
  EXPECT_EQ(format_percent(*pooled.find("Informational")->rate), "78.13%");
  EXPECT_EQ(pooled.find("Informational")->count, 32);
  // Equal weighting over the same leaves.
  std::vector<InteractionRate> as_rates{rate("fill/basicform", 1.0), rate("fill/complexform", 0.125),
                                        rate("search/selectresult", 1.0, 16)};
  auto equal = aggregate_individual(as_rates);
  EXPECT_EQ(format_percent(*equal.find("Informational")->rate), "70.83%");
}

TEST(AggregateE2E, EmptyLevelsAreAbsent) {
  auto t = aggregate_e2e({stat("fill/basicform", 0, 0), stat("fill/complexform", 0, 0)});
  EXPECT_FALSE(t.find("Fill")->rate);
  EXPECT_FALSE(t.find("Informational")->rate);
  EXPECT_EQ(t.find("Informational")->count, 0);
}

TEST(AggregateE2E, PooledRatesStayWithinChildren) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> refs{"click/button", "click/iconbutton", "click/link", "type/text",
                                      "search/selectresult", "fill/basicform", "fill/complexform"};
  for (int round = 0; round < 500; ++round) {
    std::vector<InteractionStat> leaves;
    for (const auto& r : refs) {
      int n = static_cast<int>(rng() % 20);
      int s = n == 0 ? 0 : static_cast<int>(rng() % (n + 1));
      leaves.push_back(stat(r, s, n));
    }
    auto t = aggregate_e2e(leaves);
    for (const auto* level : {&t.actions, &t.categories}) {
      for (const auto& row : *level) {
        if (!row.rate) continue;
        double lo = 1;
        double hi = 0;
        for (const auto& leaf : t.interactions) {
          auto ref = parse_ref(leaf.key);
          bool under = ref.action == row.key || category_name(ref.category) == row.key;
          if (under && leaf.rate) {
            lo = std::min(lo, *leaf.rate);
            hi = std::max(hi, *leaf.rate);
          }
        }
        EXPECT_GE(*row.rate, lo - 1e-12);
        EXPECT_LE(*row.rate, hi + 1e-12);
      }
    }
    auto shuffled = leaves;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(aggregate_e2e(shuffled), t);
  }
}

TEST(AggregateIndividual, PermutationInvariant) {
  std::mt19937_64 rng(5);
  std::vector<InteractionRate> rates;
  for (const auto& node : Taxonomy::instance().nodes()) {
    if (node.implemented) rates.push_back({node, static_cast<double>(rng() % 9) / 8.0, 8, 1});
  }
  auto base = aggregate_individual(rates);
  for (int i = 0; i < 50; ++i) {
    std::shuffle(rates.begin(), rates.end(), rng);
    EXPECT_EQ(aggregate_individual(rates), base);
  }
}

TEST(Report, CheckpointRateUsesReachedDenominator) {
  CheckpointStat c{"click_item", "click item", 0, 5};
  EXPECT_EQ(c.rate(), 0.0);
  CheckpointStat none{"customize", "customize", 0, 0};
  EXPECT_FALSE(none.rate());
  CheckpointStat s{"search", "search", 5, 8};
  EXPECT_DOUBLE_EQ(*s.rate(), 0.625);
}

}  // namespace
}  // namespace websuite
