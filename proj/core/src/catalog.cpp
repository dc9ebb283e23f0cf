#include "websuite/catalog.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "websuite/errors.hpp"
#include "websuite/url.hpp"

namespace websuite {

namespace {

std::vector<CustomizationGroup> laptop_groups() {
  return {{"memory", "Memory", {"16GB", "32GB", "64GB"}, 0},
          {"storage", "Storage", {"512GB", "1TB", "2TB"}, 0}};
}

const std::vector<CatalogItem>& items() {
  static const std::vector<CatalogItem> kItems = {
      {"mbp-m3", "MacBook Pro M3", "M3", 159900, laptop_groups()},
      {"mbp-m3-pro", "MacBook Pro M3 Pro", "M3 Pro", 199900, laptop_groups()},
      {"mbp-m3-max", "MacBook Pro M3 Max", "M3 Max", 319900, laptop_groups()},
      {"zenbook-pro-14", "ZenBook Pro 14", "Core i9", 179900, laptop_groups()},
      {"thinkpad-x1", "ThinkPad X1 Carbon", "Core Ultra 7", 164900,
       laptop_groups()},
      {"galaxy-book3", "Galaxy Book3 Ultra", "Core i7", 239900,
       laptop_groups()},
  };
  return kItems;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

[[noreturn]] void malformed(const std::string& why) {
  throw Error(ErrorCode::kMalformedCart, why);
}

}  // namespace

const CustomizationGroup* CatalogItem::group(std::string_view name) const {
  for (const auto& g : groups) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

std::span<const CatalogItem> catalog() { return items(); }

const CatalogItem* find_item(std::string_view id) {
  for (const auto& item : items()) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

std::vector<CatalogItem> search_catalog(std::string_view query) {
  std::vector<CatalogItem> out;
  auto needle = lower(query);
  for (const auto& item : items()) {
    if (lower(item.name).find(needle) != std::string::npos) {
      out.push_back(item);
    }
  }
  return out;
}

CartState default_cart(const CatalogItem& item) {
  CartState cart{item.id, {}};
  for (const auto& g : item.groups) {
    cart.options[g.name] = g.options.at(g.default_index);
  }
  return cart;
}

CartState highest_tier_cart(const CatalogItem& item) {
  CartState cart{item.id, {}};
  for (const auto& g : item.groups) cart.options[g.name] = g.options.back();
  return cart;
}

std::string encode_cart(const CartState& cart) {
  // nlohmann::json objects are key-sorted; dump() emits no whitespace.
  nlohmann::json doc = {{"item", cart.item_id}, {"options", cart.options}};
  return percent_encode(doc.dump());
}

CartState decode_cart_json(std::string_view json_text) {
  auto doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) malformed("not a JSON object");
  try {
    if (doc.dump() != json_text) malformed("not in canonical form");
  } catch (const nlohmann::json::exception&) {
    malformed("invalid UTF-8");
  }
  if (doc.size() != 2 || !doc.contains("item") || !doc.contains("options") ||
      !doc["item"].is_string() || !doc["options"].is_object()) {
    malformed("expected exactly {item, options}");
  }
  CartState cart;
  cart.item_id = doc["item"].get<std::string>();
  const auto* item = find_item(cart.item_id);
  if (!item) malformed("unknown item '" + cart.item_id + "'");
  const auto& options = doc["options"];
  if (options.size() != item->groups.size()) {
    malformed("every customization group must be chosen exactly once");
  }
  for (const auto& g : item->groups) {
    auto it = options.find(g.name);
    if (it == options.end() || !it->is_string()) {
      malformed("missing group '" + g.name + "'");
    }
    auto choice = it->get<std::string>();
    if (std::find(g.options.begin(), g.options.end(), choice) ==
        g.options.end()) {
      malformed("invalid option '" + choice + "' for " + g.name);
    }
    cart.options[g.name] = choice;
  }
  return cart;
}

CartState decode_cart(std::string_view encoded) {
  auto text = percent_decode(encoded);
  if (!text) malformed("bad percent escape");
  if (percent_encode(*text) != encoded) malformed("non-canonical escaping");
  return decode_cart_json(*text);
}

std::string shipping_value(const ShippingAddress& a) {
  return a.name + "|" + a.street + "|" + a.city + "|" + a.state + "|" + a.zip;
}

std::optional<ShippingAddress> parse_shipping_value(std::string_view value) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto bar = value.find('|', start);
    parts.emplace_back(value.substr(start, bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (parts.size() != 5) return std::nullopt;
  return ShippingAddress{parts[0], parts[1], parts[2], parts[3], parts[4]};
}

std::string format_price(std::int64_t cents) {
  std::string whole = std::to_string(cents / 100);
  std::string grouped;
  for (std::size_t i = 0; i < whole.size(); ++i) {
    if (i > 0 && (whole.size() - i) % 3 == 0) grouped.push_back(',');
    grouped.push_back(whole[i]);
  }
  auto frac = std::to_string(cents % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return "$" + grouped + "." + frac;
}

}  // namespace websuite
