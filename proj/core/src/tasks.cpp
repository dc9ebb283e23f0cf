#include "websuite/tasks.hpp"

#include <algorithm>
#include <charconv>

#include <nlohmann/json.hpp>

#include "websuite/catalog.hpp"
#include "websuite/errors.hpp"

namespace websuite {

std::string trim(std::string_view s) {
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string_view criterion_kind(const SuccessCriterion& criterion) {
  struct Visitor {
    std::string_view operator()(const LogMatch&) const { return "log_match"; }
    std::string_view operator()(const SubmittedMaterial&) const {
      return "submitted_material";
    }
    std::string_view operator()(const NoAction&) const { return "no_action"; }
    std::string_view operator()(const StateEquals&) const { return "state_equals"; }
  };
  return std::visit(Visitor{}, criterion);
}

// --- patterns -----------------------------------------------------------------

bool PayloadPattern::matches(std::string_view payload) const {
  auto p = trim(payload);
  switch (kind) {
    case Kind::kExact:
      return p == trim(text);
    case Kind::kAnyValue:
      return p.starts_with(text + "=");
    case Kind::kSearchQuery: {
      if (!p.starts_with(text + "=")) return false;
      auto query = trim(std::string_view(p).substr(text.size() + 1));
      if (query.empty()) return false;
      auto results = search_catalog(query);
      return std::any_of(results.begin(), results.end(),
                         [&](const CatalogItem& i) { return i.id == item_id; });
    }
  }
  return false;
}

std::string PayloadPattern::describe() const {
  switch (kind) {
    case Kind::kExact: return text;
    case Kind::kAnyValue: return text + "=*";
    case Kind::kSearchQuery: return text + "=<query finding " + item_id + ">";
  }
  return text;
}

bool ParamCheck::matches(const Url& url) const {
  auto value = url.get(key);
  if (!value) return false;
  switch (kind) {
    case Kind::kPresent:
      return true;
    case Kind::kExact:
      return *value == expected;
    case Kind::kQueryFinds: {
      auto results = search_catalog(*value);
      return !value->empty() &&
             std::any_of(results.begin(), results.end(),
                         [&](const CatalogItem& i) { return i.id == expected; });
    }
    case Kind::kCartEquals:
      try {
        return decode_cart_json(*value) == decode_cart_json(expected);
      } catch (const Error&) {
        return false;
      }
    case Kind::kValidCart:
      try {
        decode_cart_json(*value);
        return true;
      } catch (const Error&) {
        return false;
      }
  }
  return false;
}

bool NavPattern::matches(const Url& url) const {
  if (url.path() != path) return false;
  return std::all_of(params.begin(), params.end(),
                     [&](const ParamCheck& c) { return c.matches(url); });
}

bool NavPattern::matches(std::string_view path_with_query) const {
  auto url = Url::parse(trim(path_with_query));
  return url && matches(*url);
}

// --- suite ------------------------------------------------------------------------

const CheckpointSpec* E2ETask::checkpoint(std::string_view id_or_label) const {
  for (const auto& c : checkpoints) {
    if (c.id == id_or_label || c.label == id_or_label) return &c;
  }
  return nullptr;
}

const IndividualTask* Suite::find_individual(std::string_view id) const {
  for (const auto& t : individual) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const E2ETask* Suite::find_e2e(std::string_view id) const {
  for (const auto& t : e2e) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

bool Suite::contains(std::string_view id) const {
  return find_individual(id) != nullptr || find_e2e(id) != nullptr;
}

std::vector<std::string> Suite::task_ids() const {
  std::vector<std::string> ids;
  for (const auto& t : individual) ids.push_back(t.id);
  for (const auto& t : e2e) ids.push_back(t.id);
  return ids;
}

ShippingAddress order_shipping_address() {
  return {"John Doe", "123 Main Street", "Cambridge", "MA", "02138"};
}

namespace {

using Op = StateCheck::Op;

ExpectedEntry expect(std::string_view ref_path, std::string payload) {
  return {parse_ref(ref_path), std::move(payload)};
}

StateEquals states(std::vector<StateCheck> checks) { return {std::move(checks)}; }

IndividualTask individual(std::string_view action, std::string_view test,
                          std::string_view target, std::string goal,
                          SuccessCriterion success) {
  IndividualTask t;
  t.id = "ind/" + std::string(action) + "/" + std::string(test);
  t.start_path = "/ind/" + std::string(action) + "?test=" + std::string(test);
  t.goal = std::move(goal);
  t.target = parse_ref(target);
  t.success = std::move(success);
  bool long_task = action == "find" || action == "filter" || action == "fill";
  if (long_task) {
    t.constraints.time_limit_s = kLongTaskSeconds;
  } else {
    t.constraints.time_limit_s = kShortTaskSeconds;
    t.constraints.max_logs = 2;
  }
  return t;
}

std::vector<IndividualTask> individual_tasks() {
  return {
      individual("click", "accordion", "click/accordion",
                 "Expand the Shipping details section.",
                 states({{"acc-shipping", Op::kEquals, "expanded"}})),
      individual("click", "button", "click/button", "Click the Submit button.",
                 LogMatch{{expect("click/button", "Submit")}}),
      individual("click", "dialogbutton", "click/dialogbutton",
                 "Confirm that the file should be deleted.",
                 LogMatch{{expect("click/dialogbutton", "Delete")}}),
      individual("click", "dropdownmenu", "click/dropdownmenu",
                 "Duplicate the document using the Options menu.",
                 LogMatch{{expect("click/dropdownmenu", "Duplicate")}}),
      individual("click", "iconbutton", "click/iconbutton",
                 "Add the photo to your favorites.",
                 LogMatch{{expect("click/iconbutton", "Favorite")}}),
      individual("click", "link", "click/link", "Go to the About us page.",
                 LogMatch{{expect("click/link", "About us")}}),
      individual("click", "slider-volume", "click/slider", "Make the volume louder.",
                 states({{"sl-volume", Op::kGreaterThan, "50"}})),
      individual("click", "slider-brightness", "click/slider",
                 "Set the brightness to the maximum.",
                 states({{"sl-brightness", Op::kEquals, "100"}})),
      individual("click", "slider-temperature", "click/slider",
                 "Set the thermostat to 68 degrees.",
                 states({{"sl-temperature", Op::kEquals, "68"}})),
      individual("click", "slider-zoom", "click/slider",
                 "Zoom the map all the way out.",
                 states({{"sl-zoom", Op::kEquals, "25"}})),
      individual("click", "snackbar", "click/snackbar",
                 "Undo archiving the message.",
                 LogMatch{{expect("click/snackbar", "Undo")}}),
      individual("click", "switch", "click/switch", "Turn on do not disturb.",
                 states({{"sw-dnd", Op::kEquals, "on"}})),
      individual("click", "switch-off", "click/switch",
                 "Make sure airplane mode is off.", NoAction{}),
      individual("type", "date", "type/date", "Enter 1990-05-17 as the birth date.",
                 LogMatch{{expect("type/date", "Birth date=1990-05-17")}}),
      individual("type", "phone", "type/phone",
                 "Enter 617-555-0123 as the phone number.",
                 LogMatch{{expect("type/phone", "Phone number=617-555-0123")}}),
      individual("type", "text", "type/text", "Enter John Doe as the name.",
                 LogMatch{{expect("type/text", "Name=John Doe")}}),
      individual("select", "checkbox", "select/checkbox",
                 "Accept the terms and conditions without subscribing to "
                 "marketing emails.",
                 states({{"cb-terms", Op::kEquals, "checked"},
                         {"cb-marketing", Op::kEquals, "unchecked"}})),
      individual("select", "datagridrow", "select/datagridrow",
                 "Select the row for order 1003 only.",
                 states({{"row-1001", Op::kEquals, "unselected"},
                         {"row-1002", Op::kEquals, "unselected"},
                         {"row-1003", Op::kEquals, "selected"},
                         {"row-1004", Op::kEquals, "unselected"},
                         {"row-1005", Op::kEquals, "unselected"}})),
      individual("select", "multicheck", "select/multicheck",
                 "Choose apples and cherries.",
                 states({{"mc-apples", Op::kEquals, "checked"},
                         {"mc-bananas", Op::kEquals, "unchecked"},
                         {"mc-cherries", Op::kEquals, "checked"},
                         {"mc-dates", Op::kEquals, "unchecked"}})),
      individual("select", "select", "select/select", "Choose Canada as the country.",
                 states({{"sel-country", Op::kEquals, "Canada"}})),
      individual("navigatemenu", "basicmenu", "navigatemenu/basicmenu",
                 "Open the Settings page from the menu.",
                 LogMatch{{expect("navigatemenu/basicmenu", "Settings")}}),
      individual("navigatemenu", "nestedmenu", "navigatemenu/nestedmenu",
                 "Open the Privacy page under Account.",
                 LogMatch{{expect("navigatemenu/nestedmenu", "Account > Privacy")}}),
      individual("find", "accordion", "find/accordion",
                 "How many days do you have to return an item? Submit the number "
                 "as your answer.",
                 SubmittedMaterial{{{"Answer", "30"}}}),
      individual("find", "dialogbutton", "find/dialogbutton",
                 "What is the monthly price of the Pro plan in dollars? Submit the "
                 "number as your answer.",
                 SubmittedMaterial{{{"Answer", "24"}}}),
      individual("find", "paragraphs", "find/paragraphs",
                 "In what year was Northwind Outfitters founded? Submit it as your "
                 "answer.",
                 SubmittedMaterial{{{"Answer", "1987"}}}),
      individual("find", "tooltip", "find/tooltip",
                 "How many GB of cloud storage does the plan include? Submit the "
                 "number as your answer.",
                 SubmittedMaterial{{{"Answer", "50"}}}),
      individual("filter", "filterdatagrid", "filter/filterdatagrid",
                 "Show only the orders whose country is USA.",
                 states({{"fl-column", Op::kEquals, "Country"},
                         {"fl-value", Op::kEquals, "USA"}})),
      individual("filter", "sortdatagrid", "filter/sortdatagrid",
                 "Sort the orders by total, largest first.",
                 states({{"srt-total", Op::kEquals, "descending"}})),
      individual("fill", "basicform", "fill/basicform",
                 "Sign up with the name Jane Smith and the email jane@example.com.",
                 SubmittedMaterial{{{"Name", "Jane Smith"}, {"Email", "jane@example.com"}}}),
      individual("fill", "complexform", "fill/complexform",
                 "Register Alex Kim, phone 617-555-0199, born 1985-11-02, living in "
                 "Canada, subscribed to the newsletter.",
                 SubmittedMaterial{{{"Full name", "Alex Kim"},
                                    {"Phone", "617-555-0199"},
                                    {"Birth date", "1985-11-02"},
                                    {"Country", "Canada"},
                                    {"Subscribe to newsletter", "checked"}}}),
  };
}

GoldenEntry golden(std::string_view ref_path, std::string payload) {
  return {{parse_ref(ref_path)}, {PayloadPattern::Kind::kExact, std::move(payload), {}}};
}

std::string canonical_cart(const CartState& cart) {
  return *percent_decode(encode_cart(cart));
}

CheckpointSpec search_checkpoint(const std::string& item_id) {
  CheckpointSpec c;
  c.id = "search";
  c.label = "search";
  c.page = {"/", {}};
  c.goldens = {{{parse_ref("type/text")},
                {PayloadPattern::Kind::kSearchQuery, "Search", item_id}},
               golden("click/iconbutton", "Search")};
  c.exit = {"/search", {{"query", ParamCheck::Kind::kQueryFinds, item_id}}};
  return c;
}

CheckpointSpec click_item_checkpoint(const CatalogItem& item) {
  CheckpointSpec c;
  c.id = "click_item";
  c.label = "click item";
  c.page = {"/search", {{"query", ParamCheck::Kind::kPresent, {}}}};
  c.goldens = {{{parse_ref("click/link"), parse_ref("search/selectresult")},
                {PayloadPattern::Kind::kExact, item.name, {}}}};
  c.exit = {"/item", {{"id", ParamCheck::Kind::kExact, item.id}}};
  return c;
}

E2ETask order_task() {
  const auto& item = *find_item(kOrderItemId);
  auto cart = canonical_cart(default_cart(item));
  auto address = order_shipping_address();

  E2ETask t;
  t.id = "e2e/order";
  t.goal =
      "Please order a MacBook Pro M3 chip without additional customizations and "
      "ship it to John Doe at 123 Main Street, Cambridge, MA 02138.";
  t.start_path = "/";
  t.goal_item_id = item.id;
  t.cart_destination = "/checkout";
  t.verifier = {"/thanks",
                {{"cart", ParamCheck::Kind::kCartEquals, cart},
                 {"shipping", ParamCheck::Kind::kExact, shipping_value(address)}}};

  CheckpointSpec add;
  add.id = "add_to_cart";
  add.label = "add to cart";
  add.page = {"/item", {{"id", ParamCheck::Kind::kPresent, {}}}};
  add.goldens = {golden("click/button", "Add to cart")};
  add.exit = {"/checkout", {{"cart", ParamCheck::Kind::kCartEquals, cart}}};

  CheckpointSpec fill;
  fill.id = "fill_shipping";
  fill.label = "fill shipping";
  fill.page = {"/checkout", {{"cart", ParamCheck::Kind::kValidCart, {}}}};
  fill.goldens = {golden("type/text", "Name=" + address.name),
                  golden("type/text", "Street=" + address.street),
                  golden("type/text", "City=" + address.city),
                  golden("type/text", "State=" + address.state),
                  golden("type/text", "Zip=" + address.zip),
                  golden("click/button", "Place order")};
  fill.override_ref = parse_ref("fill/complexform");
  fill.exit = t.verifier;
  fill.exit_is_verifier = true;

  t.checkpoints = {search_checkpoint(item.id), click_item_checkpoint(item), add, fill};
  t.constraints.time_limit_s = kLongTaskSeconds;
  return t;
}

E2ETask add_to_cart_task() {
  const auto& item = *find_item(kAddToCartItemId);
  auto top = highest_tier_cart(item);

  E2ETask t;
  t.id = "e2e/add-to-cart";
  t.goal =
      "Please add a Macbook Pro with M3 Pro Chip to the cart with highest-tier "
      "customizations.";
  t.start_path = "/";
  t.goal_item_id = item.id;
  t.cart_destination = "/cart";
  t.verifier = {"/cart", {{"cart", ParamCheck::Kind::kCartEquals, canonical_cart(top)}}};

  CheckpointSpec customize;
  customize.id = "customize";
  customize.label = "customize";
  customize.page = {"/item", {{"id", ParamCheck::Kind::kPresent, {}}}};
  for (const auto& g : item.groups) {
    customize.goldens.push_back(golden("click/button", g.label + " " + top.options.at(g.name)));
  }
  customize.goldens.push_back(golden("click/button", "Add to cart"));
  customize.override_ref = parse_ref("fill/basicform");
  customize.exit = t.verifier;
  customize.exit_is_verifier = true;

  t.checkpoints = {search_checkpoint(item.id), click_item_checkpoint(item), customize};
  t.constraints.time_limit_s = kLongTaskSeconds;
  return t;
}

bool compare_state(const StateCheck& check, const std::string& actual) {
  if (check.op == StateCheck::Op::kEquals) return trim(actual) == trim(check.value);
  double a = 0, b = 0;
  auto parse = [](const std::string& s, double& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
  };
  if (!parse(trim(actual), a) || !parse(trim(check.value), b)) return false;
  return check.op == StateCheck::Op::kGreaterThan ? a > b : a < b;
}

}  // namespace

const Suite& builtin_suite() {
  static const Suite kSuite{individual_tasks(), {order_task(), add_to_cart_task()}};
  return kSuite;
}

std::vector<GoldenEntry> golden_logs_for(const E2ETask& task,
                                         std::string_view checkpoint_id) {
  const auto* c = task.checkpoint(checkpoint_id);
  if (c == nullptr) {
    throw Error(ErrorCode::kUnknownCheckpoint,
                "task " + task.id + " has no checkpoint '" + std::string(checkpoint_id) + "'");
  }
  return c->goldens;
}

bool check_individual(const IndividualTask& task, const LogStream& stream,
                      const FinalState& final_state) {
  struct Visitor {
    const LogStream& stream;
    const FinalState& state;

    bool operator()(const LogMatch& m) const {
      return std::all_of(m.expected.begin(), m.expected.end(), [&](const ExpectedEntry& e) {
        return std::any_of(stream.entries.begin(), stream.entries.end(),
                           [&](const LogEntry& l) {
                             return !l.is_nav() && l.ref == e.ref &&
                                    trim(l.payload) == trim(e.payload);
                           });
      });
    }
    bool operator()(const SubmittedMaterial& m) const {
      if (!state.submitted) return false;
      for (const auto& [key, value] : m.fields) {
        auto it = state.submitted->find(key);
        if (it == state.submitted->end() || trim(it->second) != trim(value)) return false;
      }
      return true;
    }
    bool operator()(const NoAction&) const { return stream.interaction_count() == 0; }
    bool operator()(const StateEquals& m) const {
      for (const auto& check : m.checks) {
        auto it = state.element_states.find(check.element_id);
        if (it == state.element_states.end() || !compare_state(check, it->second)) {
          return false;
        }
      }
      return true;
    }
  };
  return std::visit(Visitor{stream, final_state}, task.success);
}

bool verify_e2e(const E2ETask& task, const LogStream& stream) {
  return std::any_of(stream.entries.begin(), stream.entries.end(), [&](const LogEntry& e) {
    return e.is_nav() && task.verifier.matches(e.payload);
  });
}

namespace {

nlohmann::json to_json(const NavPattern& p) {
  auto params = nlohmann::json::array();
  static constexpr const char* kKinds[] = {"present", "exact", "query_finds",
                                           "cart_equals", "valid_cart"};
  for (const auto& c : p.params) {
    nlohmann::json j = {{"key", c.key}, {"check", kKinds[static_cast<int>(c.kind)]}};
    if (!c.expected.empty()) j["expected"] = c.expected;
    params.push_back(j);
  }
  return {{"path", p.path}, {"params", params}};
}

nlohmann::json to_json(const Constraints& c) {
  nlohmann::json j = {{"time_limit_s", c.time_limit_s}};
  if (c.max_logs) j["max_logs"] = *c.max_logs;
  return j;
}

}  // namespace

nlohmann::json suite_manifest(const Suite& suite) {
  auto individual = nlohmann::json::array();
  for (const auto& t : suite.individual) {
    individual.push_back({{"id", t.id},
                          {"start_path", t.start_path},
                          {"goal", t.goal},
                          {"interaction", format_ref(t.target)},
                          {"constraints", to_json(t.constraints)},
                          {"criterion", criterion_kind(t.success)}});
  }
  auto e2e = nlohmann::json::array();
  for (const auto& t : suite.e2e) {
    auto checkpoints = nlohmann::json::array();
    for (const auto& c : t.checkpoints) {
      auto goldens = nlohmann::json::array();
      for (const auto& g : c.goldens) {
        std::vector<std::string> refs;
        for (const auto& r : g.refs) refs.push_back(format_ref(r));
        goldens.push_back({{"refs", refs}, {"payload", g.payload.describe()}});
      }
      nlohmann::json cj = {{"id", c.id},
                           {"label", c.label},
                           {"page", to_json(c.page)},
                           {"goldens", goldens},
                           {"exit", to_json(c.exit)}};
      if (c.override_ref) cj["override"] = format_ref(*c.override_ref);
      checkpoints.push_back(cj);
    }
    e2e.push_back({{"id", t.id},
                   {"start_path", t.start_path},
                   {"goal", t.goal},
                   {"constraints", to_json(t.constraints)},
                   {"checkpoints", checkpoints},
                   {"verifier", to_json(t.verifier)}});
  }
  return {{"individual", individual}, {"e2e", e2e}};
}

}  // namespace websuite
