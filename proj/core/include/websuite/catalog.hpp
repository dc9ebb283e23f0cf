#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace websuite {

struct CustomizationGroup {
  std::string name;                  // wire key, e.g. "memory"
  std::string label;                 // e.g. "Memory"
  std::vector<std::string> options;  // ascending tier
  std::size_t default_index = 0;
};

struct CatalogItem {
  std::string id;
  std::string name;
  std::string chip;
  std::int64_t base_price_cents = 0;
  std::vector<CustomizationGroup> groups;

  const CustomizationGroup* group(std::string_view name) const;
};

/// The fixed shopping catalog, in display order.
std::span<const CatalogItem> catalog();
const CatalogItem* find_item(std::string_view id);

/// Case-insensitive substring match on item names, catalog order.
std::vector<CatalogItem> search_catalog(std::string_view query);

/// One customized item; `options` maps every group name to the chosen option.
struct CartState {
  std::string item_id;
  std::map<std::string, std::string> options;

  bool operator==(const CartState&) const = default;
};

CartState default_cart(const CatalogItem& item);
CartState highest_tier_cart(const CatalogItem& item);

/// Canonical JSON (sorted keys, no whitespace), percent-encoded for a query.
std::string encode_cart(const CartState& cart);

/// Strict inverse of encode_cart; throws Error{kMalformedCart} on anything
/// encode_cart could not have produced.
CartState decode_cart(std::string_view encoded);

/// Same check on an already percent-decoded JSON text.
CartState decode_cart_json(std::string_view json_text);

struct ShippingAddress {
  std::string name;
  std::string street;
  std::string city;
  std::string state;
  std::string zip;

  bool operator==(const ShippingAddress&) const = default;
};

/// `name|street|city|state|zip` (the unencoded query value).
std::string shipping_value(const ShippingAddress& address);
std::optional<ShippingAddress> parse_shipping_value(std::string_view value);

std::string format_price(std::int64_t cents);

}  // namespace websuite
