#include <map>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "websuite/errors.hpp"
#include "websuite/tasks.hpp"

namespace websuite {
namespace {

LogEntry line(std::string_view text) { return parse_line(text); }

LogStream stream_of(std::initializer_list<std::string_view> lines) {
  LogStream s;
  std::int64_t at = 0;
  for (auto l : lines) {
    auto e = line(l);
    e.at_ms = at += 1000;
    s.entries.push_back(e);
  }
  return s;
}

std::string nav(const CartState& cart, const ShippingAddress& a) {
  Url url("/thanks");
  url.set("cart", *percent_decode(encode_cart(cart))).set("shipping", shipping_value(a));
  return "nav // " + url.str();
}

TEST(Suite, CoversEveryImplementedInteraction) {
  const auto& suite = builtin_suite();
  std::map<std::string, int> per_interaction;
  for (const auto& t : suite.individual) {
    EXPECT_TRUE(t.target.implemented) << t.id;
    ++per_interaction[format_ref(t.target)];
  }
  for (const auto& node : Taxonomy::instance().nodes()) {
    if (!node.implemented || node.action == "Search") continue;
    EXPECT_GE(per_interaction[format_ref(node)], 1) << format_ref(node);
  }
  EXPECT_EQ(per_interaction["click/slider"], 4);
  EXPECT_EQ(per_interaction["click/switch"], 2);
  std::map<std::string, int> per_action;
  for (const auto& t : suite.individual) ++per_action[t.target.action];
  EXPECT_EQ(per_action["Type"], 3);
  EXPECT_EQ(per_action["Select"], 4);
  EXPECT_EQ(per_action["NavigateMenu"], 2);
  EXPECT_EQ(per_action["Find"], 4);
  EXPECT_EQ(per_action["Filter"], 2);
  EXPECT_EQ(per_action["Fill"], 2);
  ASSERT_EQ(suite.e2e.size(), 2u);
}

TEST(Suite, ConstraintsFollowTaskLength) {
  for (const auto& t : builtin_suite().individual) {
    const auto& a = t.target.action;
    bool long_task = a == "Find" || a == "Filter" || a == "Fill";
    EXPECT_EQ(t.constraints.time_limit_s, long_task ? kLongTaskSeconds : kShortTaskSeconds) << t.id;
    if (long_task) {
      EXPECT_FALSE(t.constraints.max_logs) << t.id;
    } else {
      EXPECT_EQ(t.constraints.max_logs, 2) << t.id;
    }
  }
  for (const auto& t : builtin_suite().e2e) EXPECT_EQ(t.constraints.time_limit_s, kLongTaskSeconds);
}

TEST(Suite, CheckpointOrder) {
  const auto* order = builtin_suite().find_e2e("e2e/order");
  ASSERT_NE(order, nullptr);
  std::vector<std::string> labels;
  for (const auto& c : order->checkpoints) labels.push_back(c.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"search", "click item", "add to cart", "fill shipping"}));
  const auto* atc = builtin_suite().find_e2e("e2e/add-to-cart");
  labels.clear();
  for (const auto& c : atc->checkpoints) labels.push_back(c.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"search", "click item", "customize"}));
  EXPECT_NE(order->goal.find("MacBook Pro M3 chip without additional customizations"),
            std::string::npos);
  EXPECT_NE(atc->goal.find("highest-tier customizations"), std::string::npos);
}

TEST(Goldens, SearchCheckpoint) {
  const auto& atc = *builtin_suite().find_e2e("e2e/add-to-cart");
  auto g = golden_logs_for(atc, "search");
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].refs, std::vector<InteractionRef>{parse_ref("type/text")});
  EXPECT_TRUE(g[0].payload.matches("Search=macbook pro m3 pro"));
  EXPECT_FALSE(g[0].payload.matches("Search=zenbook"));
  EXPECT_FALSE(g[0].payload.matches("Search="));
  EXPECT_EQ(g[1].refs, std::vector<InteractionRef>{parse_ref("click/iconbutton")});
  EXPECT_TRUE(g[1].payload.matches(" Search "));
}

TEST(Goldens, ClickItemScoresLinkAndSelectResult) {
  const auto& order = *builtin_suite().find_e2e("e2e/order");
  auto g = golden_logs_for(order, "click item");
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].refs,
            (std::vector<InteractionRef>{parse_ref("click/link"), parse_ref("search/selectresult")}));
  EXPECT_TRUE(g[0].payload.matches("MacBook Pro M3"));
  EXPECT_FALSE(g[0].payload.matches("MacBook Pro M3 Pro"));
}

TEST(Goldens, OverridesOnFormCheckpoints) {
  const auto& order = *builtin_suite().find_e2e("e2e/order");
  EXPECT_EQ(order.checkpoint("fill_shipping")->override_ref, parse_ref("fill/complexform"));
  EXPECT_EQ(order.checkpoint("add to cart")->goldens.size(), 1u);
  EXPECT_FALSE(order.checkpoint("add_to_cart")->override_ref);
  const auto& atc = *builtin_suite().find_e2e("e2e/add-to-cart");
  EXPECT_EQ(atc.checkpoint("customize")->override_ref, parse_ref("fill/basicform"));
  try {
    golden_logs_for(order, "customize");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownCheckpoint);
  }
}

TEST(CheckIndividual, SwitchFlip) {
  const auto& task = *builtin_suite().find_individual("ind/click/switch");
  FinalState on{"/", {{"sw-dnd", "on"}}, std::nullopt};
  EXPECT_TRUE(check_individual(task, stream_of({"click/switch // Do not disturb=on"}), on));
  FinalState off{"/", {{"sw-dnd", "off"}}, std::nullopt};
  EXPECT_FALSE(check_individual(task, stream_of({}), off));
}

TEST(CheckIndividual, SwitchAlreadyOffMeansDoNothing) {
  const auto& task = *builtin_suite().find_individual("ind/click/switch-off");
  EXPECT_EQ(criterion_kind(task.success), "no_action");
  FinalState state{"/", {{"sw-airplane", "off"}}, std::nullopt};
  EXPECT_TRUE(check_individual(task, stream_of({}), state));
  EXPECT_FALSE(check_individual(task, stream_of({"click/switch // Airplane mode=on"}), state));
}

TEST(CheckIndividual, LogMatchTrimsPayload) {
  const auto& task = *builtin_suite().find_individual("ind/click/button");
  FinalState state;
  EXPECT_TRUE(check_individual(task, stream_of({"click/button //  Submit "}), state));
  EXPECT_FALSE(check_individual(task, stream_of({"click/button // submit"}), state));
  EXPECT_FALSE(check_individual(task, stream_of({"click/iconbutton // Submit"}), state));
}

TEST(CheckIndividual, FilterNeedsCountryColumn) {
  const auto& task = *builtin_suite().find_individual("ind/filter/filterdatagrid");
  FinalState good{"/", {{"fl-column", "Country"}, {"fl-value", "USA"}}, std::nullopt};
  FinalState wrong{"/", {{"fl-column", "Name"}, {"fl-value", "USA"}}, std::nullopt};
  EXPECT_TRUE(check_individual(task, stream_of({}), good));
  EXPECT_FALSE(check_individual(task, stream_of({}), wrong));
}

TEST(CheckIndividual, SliderThresholds) {
  const auto& volume = *builtin_suite().find_individual("ind/click/slider-volume");
  EXPECT_TRUE(check_individual(volume, {}, FinalState{"/", {{"sl-volume", "51"}}, std::nullopt}));
  EXPECT_FALSE(check_individual(volume, {}, FinalState{"/", {{"sl-volume", "50"}}, std::nullopt}));
  EXPECT_FALSE(check_individual(volume, {}, FinalState{"/", {{"sl-volume", "x"}}, std::nullopt}));
  const auto& zoom = *builtin_suite().find_individual("ind/click/slider-zoom");
  EXPECT_TRUE(check_individual(zoom, {}, FinalState{"/", {{"sl-zoom", "25"}}, std::nullopt}));
}

TEST(CheckIndividual, SubmittedMaterial) {
  const auto& task = *builtin_suite().find_individual("ind/find/paragraphs");
  FinalState none;
  EXPECT_FALSE(check_individual(task, {}, none));
  FinalState submitted{"/", {}, std::map<std::string, std::string>{{"Answer", " 1987 "}}};
  EXPECT_TRUE(check_individual(task, {}, submitted));
  submitted.submitted->at("Answer") = "1988";
  EXPECT_FALSE(check_individual(task, {}, submitted));
}

TEST(Verifier, OrderNeedsExactCartAndAddress) {
  const auto& order = *builtin_suite().find_e2e("e2e/order");
  auto cart = default_cart(*find_item(kOrderItemId));
  auto address = order_shipping_address();
  EXPECT_EQ(shipping_value(address), "John Doe|123 Main Street|Cambridge|MA|02138");
  EXPECT_TRUE(verify_e2e(order, stream_of({nav(cart, address)})));
  auto wrong_zip = address;
  wrong_zip.zip = "02139";
  EXPECT_FALSE(verify_e2e(order, stream_of({nav(cart, wrong_zip)})));
  EXPECT_FALSE(verify_e2e(order, stream_of({nav(highest_tier_cart(*find_item(kOrderItemId)), address)})));
  EXPECT_FALSE(verify_e2e(order, stream_of({})));
}

TEST(Verifier, AddToCartHighestTier) {
  const auto& atc = *builtin_suite().find_e2e("e2e/add-to-cart");
  // Oracle: take the last option of each group, then encode.
  const auto* item = find_item(kAddToCartItemId);
  CartState top{item->id, {}};
  for (const auto& g : item->groups) top.options[g.name] = g.options.back();
  EXPECT_TRUE(verify_e2e(atc, stream_of({"nav // /cart?cart=" + encode_cart(top)})));
  EXPECT_FALSE(verify_e2e(atc, stream_of({"nav // /cart?cart=" + encode_cart(default_cart(*item))})));
  EXPECT_FALSE(verify_e2e(atc, stream_of({"click/button // /cart?cart=" + encode_cart(top)})));
}

TEST(NavPattern, TypedParams) {
  const auto& order = *builtin_suite().find_e2e("e2e/order");
  const auto& search = *order.checkpoint("search");
  EXPECT_TRUE(search.exit.matches("/search?query=macbook%20pro"));
  EXPECT_FALSE(search.exit.matches("/search?query=thinkpad"));
  EXPECT_FALSE(search.exit.matches("/item?query=macbook"));
  EXPECT_FALSE(search.exit.matches("not a path"));
}

TEST(Manifest, ListsTasks) {
  auto doc = suite_manifest(builtin_suite());
  EXPECT_EQ(doc["individual"].size(), builtin_suite().individual.size());
  EXPECT_EQ(doc["individual"][0]["start_path"], "/ind/click?test=accordion");
  EXPECT_EQ(doc["e2e"][0]["checkpoints"][3]["override"], "fill/complexform");
  EXPECT_EQ(doc["e2e"][0]["checkpoints"][1]["goldens"][0]["refs"][1], "search/selectresult");
}

TEST(Suite, Lookup) {
  const auto& suite = builtin_suite();
  EXPECT_TRUE(suite.contains("ind/type/date"));
  EXPECT_TRUE(suite.contains("e2e/order"));
  EXPECT_FALSE(suite.contains("ind/type/emoji"));
  auto ids = suite.task_ids();
  EXPECT_EQ(ids.size(), suite.individual.size() + suite.e2e.size());
  EXPECT_EQ(ids.back(), "e2e/add-to-cart");
}

}  // namespace
}  // namespace websuite
