#include "websuite/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include <nlohmann/json.hpp>

#include "websuite/errors.hpp"

namespace websuite {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownInteraction: return "UnknownInteraction";
    case ErrorCode::kMalformedRef: return "MalformedRef";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kUnknownSession: return "UnknownSession";
    case ErrorCode::kUnknownTask: return "UnknownTask";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kUnknownElement: return "UnknownElement";
    case ErrorCode::kIncompatibleVerb: return "IncompatibleVerb";
    case ErrorCode::kBusy: return "Busy";
    case ErrorCode::kMalformedCart: return "MalformedCart";
    case ErrorCode::kUnknownCheckpoint: return "UnknownCheckpoint";
    case ErrorCode::kAgentError: return "AgentError";
    case ErrorCode::kSuiteMismatch: return "SuiteMismatch";
    case ErrorCode::kMalformedArchive: return "MalformedArchive";
    case ErrorCode::kMalformedReport: return "MalformedReport";
  }
  return "Unknown";
}

std::string_view category_name(Category category) {
  switch (category) {
    case Category::kOperational: return "Operational";
    case Category::kNavigational: return "Navigational";
    case Category::kInformational: return "Informational";
  }
  return "";
}

std::optional<Category> category_from_name(std::string_view name) {
  for (auto c : {Category::kOperational, Category::kNavigational,
                 Category::kInformational}) {
    if (category_name(c) == name) return c;
  }
  return std::nullopt;
}

bool InteractionRef::operator<(const InteractionRef& other) const {
  return std::tie(navigation, category, action, interaction) <
         std::tie(other.navigation, other.category, other.action,
                  other.interaction);
}

namespace {

struct Leaf {
  const char* interaction;
  const char* display;
  bool implemented;
};

struct ActionRow {
  Category category;
  const char* action;
  const char* display;
  std::vector<Leaf> leaves;
};

// Row order follows the published operational / navigational /
// informational interaction tables; `implemented` mirrors their checkmarks.
std::vector<ActionRow> registry_rows() {
  using C = Category;
  return {
      {C::kOperational, "Click", "Click",
       {{"Accordion", "Accordion", true},
        {"Button", "Button", true},
        {"DialogButton", "Dialog button", true},
        {"DropdownMenu", "Dropdown menu", true},
        {"IconButton", "Icon button", true},
        {"Link", "Link", true},
        {"Slider", "Slider", true},
        {"Snackbar", "Snackbar", true},
        {"Switch", "Switch", true},
        {"Drawer", "Drawer", false},
        {"Tab", "Tab", false},
        {"FloatingActionButton", "Floating action button", false}}},
      {C::kOperational, "Type", "Type",
       {{"Date", "Date", true},
        {"Phone", "Phone", true},
        {"Text", "Text field", true}}},
      {C::kOperational, "Select", "Select",
       {{"Checkbox", "Checkbox", true},
        {"DatagridRow", "Grid row", true},
        {"Multicheck", "Multicheck", true},
        {"Select", "Select", true},
        {"Radio", "Radio", false},
        {"Chips", "Chips", false}}},
      {C::kNavigational, "NavigateURL", "URL",
       {{"ArbitraryPage", "Navigate to arbitrary page", false}}},
      {C::kNavigational, "NavigateMenu", "Menu",
       {{"BasicMenu", "Basic", true}, {"NestedMenu", "Nested", true}}},
      {C::kNavigational, "NavigateHistory", "History",
       {{"ArbitraryPages", "Navigate across arbitrary pages", false}}},
      {C::kInformational, "Find", "Find",
       {{"Accordion", "Accordion", true},
        {"DialogButton", "Dialog button", true},
        {"Paragraphs", "Paragraphs", true},
        {"Tooltip", "Tooltip", true},
        {"Table", "Table", false}}},
      {C::kInformational, "Filter", "Filter",
       {{"FilterDatagrid", "Filter datagrid", true},
        {"SortDatagrid", "Sort datagrid", true},
        {"FilterSearchResults", "Filter search results", false},
        {"SortSearchResults", "Sort search results", false},
        {"FilterSpreadsheet", "Filter spreadsheet", false},
        {"SortSpreadsheet", "Sort spreadsheet", false}}},
      {C::kInformational, "Search", "Search",
       {{"WriteQuery", "Write query", false},
        {"SelectResult", "Select result", false}}},
      {C::kInformational, "Fill", "Fill",
       {{"BasicForm", "Basic", true}, {"ComplexForm", "Complex", true}}},
      {C::kInformational, "Review", "Review",
       {{"ConfirmForm", "Confirm form is correct", false},
        {"ChangeIncorrect", "Change incorrect form elements", false}}},
  };
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_lower_word(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c >= 'a' && c <= 'z';
  });
}

}  // namespace

Taxonomy::Taxonomy() {
  for (auto& row : registry_rows()) {
    actions_.push_back({row.category, row.action, row.display});
    for (auto& leaf : row.leaves) {
      nodes_.push_back({row.category, row.action, leaf.interaction,
                        leaf.implemented, false});
      displays_.emplace_back(leaf.display);
    }
  }
  navigation_.navigation = true;
  navigation_.implemented = true;
}

const Taxonomy& Taxonomy::instance() {
  static const Taxonomy taxonomy;
  return taxonomy;
}

const Taxonomy& canonical_registry() { return Taxonomy::instance(); }

std::vector<InteractionRef> Taxonomy::children(std::string_view action) const {
  std::vector<InteractionRef> out;
  for (const auto& n : nodes_) {
    if (n.action == action) out.push_back(n);
  }
  return out;
}

const Taxonomy::Action* Taxonomy::find_action(std::string_view action) const {
  for (const auto& a : actions_) {
    if (a.name == action) return &a;
  }
  return nullptr;
}

const InteractionRef* Taxonomy::find(std::string_view action,
                                     std::string_view interaction) const {
  for (const auto& n : nodes_) {
    if (n.action == action && n.interaction == interaction) return &n;
  }
  return nullptr;
}

std::string Taxonomy::display_name(const InteractionRef& ref) const {
  if (ref.navigation) return "Navigation";
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i] == ref) return displays_[i];
  }
  return ref.interaction;
}

std::string Taxonomy::action_display(std::string_view action) const {
  const auto* a = find_action(action);
  return a ? a->display : std::string(action);
}

InteractionRef parse_ref(std::string_view text) {
  if (text == "nav") return Taxonomy::instance().navigation();
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw Error(ErrorCode::kMalformedRef, "expected action/interaction: '" +
                                              std::string(text) + "'");
  }
  auto action = text.substr(0, slash);
  auto interaction = text.substr(slash + 1);
  if (!is_lower_word(action) || !is_lower_word(interaction)) {
    throw Error(ErrorCode::kMalformedRef,
                "reference must be lowercase letters: '" + std::string(text) +
                    "'");
  }
  for (const auto& node : Taxonomy::instance().nodes()) {
    if (lower(node.action) == action && lower(node.interaction) == interaction) {
      return node;
    }
  }
  throw Error(ErrorCode::kUnknownInteraction, std::string(text));
}

std::string format_ref(const InteractionRef& ref) {
  if (ref.navigation) return "nav";
  return lower(ref.action) + "/" + lower(ref.interaction);
}

nlohmann::json taxonomy_document(const Taxonomy& taxonomy) {
  auto nodes = nlohmann::json::array();
  for (const auto& n : taxonomy.nodes()) {
    nodes.push_back({{"category", category_name(n.category)},
                     {"action", n.action},
                     {"interaction", n.interaction},
                     {"ref", format_ref(n)},
                     {"display", taxonomy.display_name(n)},
                     {"implemented", n.implemented}});
  }
  return {{"nodes", nodes}, {"pseudo_nodes", {"nav"}}};
}

}  // namespace websuite
