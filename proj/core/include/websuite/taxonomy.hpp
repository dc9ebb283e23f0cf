#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace websuite {

enum class Category { kOperational, kNavigational, kInformational };

std::string_view category_name(Category category);
std::optional<Category> category_from_name(std::string_view name);

/// One leaf of the category -> action -> interaction taxonomy, or the
/// navigation pseudo-node used for `nav` log lines.
///
/// Identity is the (action, interaction) pair; `category`, `implemented` and
/// the display strings are derived from the registry.
struct InteractionRef {
  Category category = Category::kOperational;
  std::string action;       // e.g. "Click", "NavigateMenu"
  std::string interaction;  // e.g. "IconButton", "BasicForm"
  bool implemented = false;
  bool navigation = false;

  bool operator==(const InteractionRef& other) const {
    return navigation == other.navigation && action == other.action &&
           interaction == other.interaction;
  }
  bool operator<(const InteractionRef& other) const;
};

/// Immutable registry of every taxonomy node. Safe to share across threads.
class Taxonomy {
 public:
  struct Action {
    Category category;
    std::string name;
    std::string display;
  };

  static const Taxonomy& instance();

  std::span<const InteractionRef> nodes() const { return nodes_; }
  std::span<const Action> actions() const { return actions_; }

  std::vector<InteractionRef> children(std::string_view action) const;
  const Action* find_action(std::string_view action) const;
  const InteractionRef* find(std::string_view action,
                             std::string_view interaction) const;
  const InteractionRef& navigation() const { return navigation_; }

  /// Human-readable interaction name as printed in result tables.
  std::string display_name(const InteractionRef& ref) const;
  std::string action_display(std::string_view action) const;

 private:
  Taxonomy();

  std::vector<Action> actions_;
  std::vector<InteractionRef> nodes_;
  std::vector<std::string> displays_;  // parallel to nodes_
  InteractionRef navigation_;
};

/// The canonical registry in stable (category, table) order.
const Taxonomy& canonical_registry();

/// Parses `action/interaction` (lowercase compact form) or `nav`.
/// Throws Error{kMalformedRef} or Error{kUnknownInteraction}.
InteractionRef parse_ref(std::string_view text);

std::string format_ref(const InteractionRef& ref);

/// Registry export: one record per node.
nlohmann::json taxonomy_document(const Taxonomy& taxonomy);

}  // namespace websuite
