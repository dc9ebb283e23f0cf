#pragma once

// Hand-written log streams for the two shopping tasks, shared by the
// attribution tests and the acceptance binary.

#include <string>
#include <vector>

#include "websuite/attribution.hpp"
#include "websuite/catalog.hpp"
#include "websuite/logmodel.hpp"
#include "websuite/tasks.hpp"
#include "websuite/url.hpp"

namespace websuite::testing {

inline std::string cart_nav(std::string_view path, const CartState& cart) {
  Url url{std::string(path)};
  url.set("cart", *percent_decode(encode_cart(cart)));
  return "nav // " + url.str();
}

inline std::string thanks_nav(const CartState& cart, const ShippingAddress& a) {
  Url url("/thanks");
  url.set("cart", *percent_decode(encode_cart(cart))).set("shipping", shipping_value(a));
  return "nav // " + url.str();
}

/// Work and exit lines of each checkpoint of a fully correct trial.
struct CheckpointLines {
  std::vector<std::string> work;
  std::string exit;
};

inline std::vector<CheckpointLines> order_lines() {
  const auto* item = find_item(kOrderItemId);
  auto cart = default_cart(*item);
  auto a = order_shipping_address();
  return {
      {{"type/text // Search=MacBook Pro M3", "click/iconbutton // Search"},
       "nav // /search?query=MacBook%20Pro%20M3"},
      {{"click/link // MacBook Pro M3"}, "nav // /item?id=mbp-m3"},
      {{"click/button // Add to cart"}, cart_nav("/checkout", cart)},
      {{"type/text // Name=" + a.name, "type/text // Street=" + a.street,
        "type/text // City=" + a.city, "type/text // State=" + a.state,
        "type/text // Zip=" + a.zip, "click/button // Place order",
        "fill/complexform // Name=" + a.name + "; Street=" + a.street + "; City=" + a.city +
            "; State=" + a.state + "; Zip=" + a.zip},
       thanks_nav(cart, a)},
  };
}

inline std::vector<CheckpointLines> add_to_cart_lines() {
  const auto* item = find_item(kAddToCartItemId);
  return {
      {{"type/text // Search=MacBook Pro M3 Pro", "click/iconbutton // Search"},
       "nav // /search?query=MacBook%20Pro%20M3%20Pro"},
      {{"click/link // MacBook Pro M3 Pro"}, "nav // /item?id=mbp-m3-pro"},
      {{"click/button // Memory 64GB", "click/button // Storage 2TB",
        "fill/basicform // Memory=64GB; Storage=2TB", "click/button // Add to cart"},
       cart_nav("/cart", highest_tier_cart(*item))},
  };
}

/// Parses lines into a stream with one second between entries and distinct
/// element ids for typed fields, so debouncing never merges them.
inline LogStream make_stream(const std::vector<std::string>& lines) {
  LogStream s;
  s.session_id = "t";
  std::int64_t at = 0;
  std::int64_t seq = 0;
  for (const auto& l : lines) {
    auto e = parse_line(l);
    e.seq = ++seq;
    e.at_ms = at += 1000;
    s.entries.push_back(std::move(e));
  }
  return s;
}

/// Concatenates the first `complete` checkpoints in full.
inline std::vector<std::string> prefix_lines(const std::vector<CheckpointLines>& cps,
                                             std::size_t complete) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < complete && k < cps.size(); ++k) {
    out.insert(out.end(), cps[k].work.begin(), cps[k].work.end());
    out.push_back(cps[k].exit);
  }
  return out;
}

/// Per-interaction individual results for the two reference agents, as
/// printed in the detailed individual results table (percent).
struct IndividualLeaf {
  const char* ref;
  int trials;
  int tasks;
  double natbot;
  double seeact;
};

inline const std::vector<IndividualLeaf>& individual_leaves() {
  static const std::vector<IndividualLeaf> rows{
      {"click/accordion", 8, 1, 100, 100},
      {"click/button", 8, 1, 100, 100},
      {"click/dialogbutton", 8, 1, 100, 87.5},
      {"click/dropdownmenu", 8, 1, 100, 100},
      {"click/iconbutton", 8, 1, 100, 87.5},
      {"click/link", 8, 1, 100, 37.5},
      {"click/slider", 32, 4, 0, 0},
      {"click/snackbar", 8, 1, 12.5, 100},
      {"click/switch", 8, 1, 50, 37.5},
      {"type/date", 8, 1, 100, 87.5},
      {"type/phone", 8, 1, 100, 100},
      {"type/text", 8, 1, 100, 100},
      {"select/checkbox", 8, 1, 100, 100},
      {"select/datagridrow", 8, 1, 100, 93.75},
      {"select/multicheck", 8, 1, 100, 87.5},
      {"select/select", 8, 1, 100, 0},
      {"navigatemenu/basicmenu", 8, 1, 100, 100},
      {"navigatemenu/nestedmenu", 8, 1, 87.5, 62.5},
      {"find/accordion", 8, 1, 100, 50},
      {"find/dialogbutton", 8, 1, 12.5, 87.5},
      {"find/paragraphs", 8, 1, 100, 0},
      {"find/tooltip", 8, 1, 0, 0},
      {"filter/filterdatagrid", 8, 1, 0, 0},
      {"filter/sortdatagrid", 8, 1, 100, 100},
      {"fill/basicform", 8, 1, 25, 87.5},
      {"fill/complexform", 8, 1, 12.5, 0},
  };
  return rows;
}

inline std::vector<InteractionRate> individual_rates(bool natbot) {
  std::vector<InteractionRate> out;
  for (const auto& row : individual_leaves()) {
    out.push_back({parse_ref(row.ref), (natbot ? row.natbot : row.seeact) / 100.0, row.trials,
                   row.tasks});
  }
  return out;
}

/// The same leaves as per-task counts of 8 trials each. A rate that is not a
/// multiple of 1/8 is split across two tasks (93.75% = 8/8 and 7/8).
inline std::vector<TaskStat> individual_task_stats(bool natbot) {
  std::vector<TaskStat> out;
  for (const auto& row : individual_leaves()) {
    double pct = natbot ? row.natbot : row.seeact;
    double eighths = pct * 8 / 100.0;
    if (eighths == static_cast<int>(eighths)) {
      for (int t = 0; t < row.tasks; ++t) {
        out.push_back({std::string("ind/") + row.ref + "/" + std::to_string(t), row.ref,
                       static_cast<int>(eighths), 8});
      }
    } else {
      int hi = static_cast<int>(eighths) + 1;
      int lo = static_cast<int>(2 * eighths) - hi;
      out.push_back({std::string("ind/") + row.ref + "/0", row.ref, hi, 8});
      out.push_back({std::string("ind/") + row.ref + "/1", row.ref, lo, 8});
    }
  }
  return out;
}

/// E2E interaction leaves (successes, instances).
inline std::vector<InteractionStat> e2e_leaves(bool natbot) {
  auto s = [](std::string_view ref, int ok, int n) { return InteractionStat{parse_ref(ref), ok, n}; };
  if (natbot) {
    return {s("click/button", 8, 8),          s("click/iconbutton", 16, 16),
            s("click/link", 16, 16),          s("type/text", 16, 16),
            s("search/selectresult", 16, 16), s("fill/basicform", 8, 8),
            s("fill/complexform", 1, 8)};
  }
  return {s("click/button", 0, 0),          s("click/iconbutton", 13, 16),
          s("click/link", 0, 13),           s("type/text", 16, 16),
          s("search/selectresult", 0, 13),  s("fill/basicform", 0, 0),
          s("fill/complexform", 0, 0)};
}

/// E2E checkpoint counts (completed, reached).
inline std::vector<E2ETaskStat> e2e_task_stats(bool natbot) {
  if (natbot) {
    return {{"e2e/order", 1, 8,
             {{"search", "search", 8, 8}, {"click_item", "click item", 8, 8},
              {"add_to_cart", "add to cart", 8, 8}, {"fill_shipping", "fill shipping", 1, 8}}},
            {"e2e/add-to-cart", 8, 8,
             {{"search", "search", 8, 8}, {"click_item", "click item", 8, 8},
              {"customize", "customize", 8, 8}}}};
  }
  return {{"e2e/order", 0, 8,
           {{"search", "search", 8, 8}, {"click_item", "click item", 0, 8},
            {"add_to_cart", "add to cart", 0, 0}, {"fill_shipping", "fill shipping", 0, 0}}},
          {"e2e/add-to-cart", 0, 8,
           {{"search", "search", 5, 8}, {"click_item", "click item", 0, 5},
            {"customize", "customize", 0, 0}}}};
}

inline AttributionReport reference_report(bool natbot) {
  return make_report(natbot ? "ref-natbot" : "ref-seeact", natbot ? "natbot" : "SeeAct",
                     individual_task_stats(natbot), e2e_task_stats(natbot), e2e_leaves(natbot));
}

}  // namespace websuite::testing
