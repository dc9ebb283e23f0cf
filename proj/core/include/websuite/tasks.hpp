#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "websuite/catalog.hpp"
#include "websuite/logmodel.hpp"
#include "websuite/page.hpp"
#include "websuite/taxonomy.hpp"
#include "websuite/url.hpp"

namespace websuite {

struct Constraints {
  int time_limit_s = 90;
  std::optional<int> max_logs;
};

inline constexpr int kShortTaskSeconds = 90;
inline constexpr int kLongTaskSeconds = 300;

// --- success criteria -------------------------------------------------------

struct ExpectedEntry {
  InteractionRef ref;
  std::string payload;
};

struct LogMatch {
  std::vector<ExpectedEntry> expected;
};

struct SubmittedMaterial {
  std::map<std::string, std::string> fields;
};

struct NoAction {};

struct StateCheck {
  enum class Op { kEquals, kGreaterThan, kLessThan };
  std::string element_id;
  Op op = Op::kEquals;
  std::string value;
};

struct StateEquals {
  std::vector<StateCheck> checks;
};

using SuccessCriterion =
    std::variant<LogMatch, SubmittedMaterial, NoAction, StateEquals>;

std::string_view criterion_kind(const SuccessCriterion& criterion);

struct IndividualTask {
  std::string id;
  std::string start_path;
  std::string goal;
  InteractionRef target;
  Constraints constraints;
  SuccessCriterion success;
};

// --- E2E ---------------------------------------------------------------------

/// How a golden entry's payload is compared to a logged payload.
struct PayloadPattern {
  enum class Kind {
    kExact,        // equal after trimming
    kAnyValue,     // `<text>=<anything>`
    kSearchQuery,  // `<text>=<q>` where searching q lists `item_id`
  };
  Kind kind = Kind::kExact;
  std::string text;
  std::string item_id;

  bool matches(std::string_view payload) const;
  std::string describe() const;
};

struct GoldenEntry {
  std::vector<InteractionRef> refs;  // all scored for one physical event
  PayloadPattern payload;
};

/// One typed requirement on a query parameter of a navigation.
struct ParamCheck {
  enum class Kind {
    kPresent,
    kExact,        // decoded value equals `expected`
    kQueryFinds,   // search_catalog(value) contains item `expected`
    kCartEquals,   // decode_cart_json(value) == decode_cart_json(expected)
    kValidCart,    // value is a canonical cart
  };
  std::string key;
  Kind kind = Kind::kPresent;
  std::string expected;

  bool matches(const Url& url) const;
};

/// A literal path plus typed query parameter requirements.
struct NavPattern {
  std::string path;
  std::vector<ParamCheck> params;

  bool matches(const Url& url) const;
  bool matches(std::string_view path_with_query) const;
};

struct CheckpointSpec {
  std::string id;     // e.g. "click_item"
  std::string label;  // e.g. "click item"
  NavPattern page;    // where the checkpoint's work happens
  std::vector<GoldenEntry> goldens;
  std::optional<InteractionRef> override_ref;
  NavPattern exit;    // navigation that proves the checkpoint was completed
  bool exit_is_verifier = false;
};

struct E2ETask {
  std::string id;
  std::string goal;
  std::string start_path;
  std::string goal_item_id;
  std::string cart_destination;  // path the item page's "Add to cart" opens
  std::vector<CheckpointSpec> checkpoints;
  NavPattern verifier;
  Constraints constraints;

  const CheckpointSpec* checkpoint(std::string_view id_or_label) const;
};

struct Suite {
  std::vector<IndividualTask> individual;
  std::vector<E2ETask> e2e;

  const IndividualTask* find_individual(std::string_view id) const;
  const E2ETask* find_e2e(std::string_view id) const;
  bool contains(std::string_view id) const;
  std::vector<std::string> task_ids() const;
};

/// Every implemented interaction's tasks plus the order and add-to-cart E2E
/// tasks.
const Suite& builtin_suite();

/// Throws Error{kUnknownCheckpoint}.
std::vector<GoldenEntry> golden_logs_for(const E2ETask& task,
                                         std::string_view checkpoint_id);

/// Evaluated on the debounced stream.
bool check_individual(const IndividualTask& task, const LogStream& stream,
                      const FinalState& final_state);

/// True iff some nav entry satisfies the task's verifier pattern.
bool verify_e2e(const E2ETask& task, const LogStream& stream);

// Shopping goal constants shared by the task table and the reference agents.
inline constexpr std::string_view kOrderItemId = "mbp-m3";
inline constexpr std::string_view kAddToCartItemId = "mbp-m3-pro";
ShippingAddress order_shipping_address();

nlohmann::json suite_manifest(const Suite& suite);

std::string trim(std::string_view s);

}  // namespace websuite
