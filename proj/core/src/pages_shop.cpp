#include <algorithm>

#include "websuite/catalog.hpp"
#include "websuite/errors.hpp"
#include "pages.hpp"

namespace websuite::pages {

namespace {

std::string cart_json(const CartState& cart) {
  return *percent_decode(encode_cart(cart));
}

std::optional<CartState> cart_param(const Url& url) {
  auto raw = url.get("cart");
  if (!raw) return std::nullopt;
  try {
    return decode_cart_json(*raw);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::int64_t cart_price(const CartState& cart) {
  const auto* item = find_item(cart.item_id);
  std::int64_t cents = item->base_price_cents;
  for (const auto& g : item->groups) {
    const auto& opts = g.options;
    auto chosen = cart.options.at(g.name);
    for (std::size_t i = 0; i < opts.size(); ++i) {
      if (opts[i] == chosen) cents += static_cast<std::int64_t>(i) * 20000;
    }
  }
  return cents;
}

void render_cart(PageBuilder& b, const CartState& cart) {
  const auto* item = find_item(cart.item_id);
  b.raw("<div class=\"cart-line\">\n");
  b.paragraph(item->name);
  for (const auto& g : item->groups) {
    b.paragraph(g.label + ": " + cart.options.at(g.name));
  }
  b.paragraph("Total: " + format_price(cart_price(cart)));
  b.raw("</div>\n");
}

void render_search_box(PageBuilder& b, const std::string& value) {
  b.raw("<form role=\"search\">\n");
  b.element(make_element("search-box", "type/text", "Search", value));
  b.element(make_element("search-button", "click/iconbutton", "Search"));
  b.raw("</form>\n");
}

std::optional<Outcome> apply_search_box(const Url& url, const ActionCommand& cmd,
                                        const ElementManifest& target) {
  if (target.element_id == "search-box") {
    Url next = url;
    next.set("q", cmd.payload);
    return Outcome{next, {log_entry("type/text", "Search=" + cmd.payload, "search-box")},
                   false};
  }
  if (target.element_id == "search-button") {
    auto query = url.get_or("q", url.get_or("query", ""));
    Url next("/search");
    next.set("query", query);
    return Outcome{next, {log_entry("click/iconbutton", "Search", "search-button")},
                   true};
  }
  return std::nullopt;
}

class HomePage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), "Laptop Store");
    b.heading("Laptop Store");
    render_search_box(b, url.get_or("q", ""));
    b.paragraph("Find the right laptop for work and play.");
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand& cmd,
                const ElementManifest& target) const override {
    if (auto out = apply_search_box(url, cmd, target)) return *out;
    return {url, {}, false};
  }
};

class SearchPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    auto query = url.get_or("query", "");
    PageBuilder b(url.str(), "Search results");
    render_search_box(b, url.get_or("q", query));
    auto results = search_catalog(query);
    b.heading(std::to_string(results.size()) + " results for \"" + query + "\"");
    for (const auto& item : results) {
      b.raw("<div class=\"result-card\" id=\"card-" + html_escape(item.id) + "\">\n");
      b.element(make_element("result-link-" + item.id, "click/link", item.name));
      b.paragraph(item.chip + " from " + format_price(item.base_price_cents));
      b.raw("</div>\n");
    }
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand& cmd,
                const ElementManifest& target) const override {
    if (auto out = apply_search_box(url, cmd, target)) return *out;
    constexpr std::string_view kPrefix = "result-link-";
    if (target.element_id.starts_with(kPrefix)) {
      Url next("/item");
      next.set("id", target.element_id.substr(kPrefix.size()));
      return {next, {log_entry("click/link", target.label, target.element_id)}, true};
    }
    return {url, {}, false};
  }
};

class ItemPage : public Page {
 public:
  explicit ItemPage(std::string cart_destination)
      : cart_destination_(std::move(cart_destination)) {}

  PageDoc render(const Url& url) const override {
    const auto* item = find_item(url.get_or("id", ""));
    if (item == nullptr) {
      PageBuilder b(url.str(), "Not found");
      b.heading("Item not found");
      return std::move(b).build();
    }
    auto cart = current(*item, url);
    PageBuilder b(url.str(), item->name);
    b.heading(item->name);
    b.paragraph("Chip: " + item->chip);
    for (const auto& g : item->groups) {
      b.raw("<fieldset>\n<legend>" + html_escape(g.label) + "</legend>\n");
      for (const auto& opt : g.options) {
        b.element(make_element(option_id(g, opt), "click/button",
                               g.label + " " + opt,
                               cart.options[g.name] == opt ? "selected" : ""));
      }
      b.raw("</fieldset>\n");
    }
    b.paragraph("Price: " + format_price(cart_price(cart)));
    b.element(make_element("add-to-cart", "click/button", "Add to cart"));
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand&,
                const ElementManifest& target) const override {
    const auto* item = find_item(url.get_or("id", ""));
    if (item == nullptr) return {url, {}, false};
    if (target.element_id == "add-to-cart") {
      Url next(cart_destination_);
      next.set("cart", cart_json(current(*item, url)));
      return {next, {log_entry("click/button", "Add to cart", "add-to-cart")}, true};
    }
    for (const auto& g : item->groups) {
      for (const auto& opt : g.options) {
        if (option_id(g, opt) != target.element_id) continue;
        Url next = url;
        next.set(g.name, opt);
        Outcome out{next, {log_entry("click/button", target.label, target.element_id)},
                    false};
        bool all_set = true;
        std::string summary;
        for (const auto& other : item->groups) {
          all_set = all_set && next.has(other.name);
          if (!summary.empty()) summary += "; ";
          summary += other.label + "=" + next.get_or(other.name, "");
        }
        if (all_set) out.entries.push_back(log_entry("fill/basicform", summary));
        return out;
      }
    }
    return {url, {}, false};
  }

 private:
  static std::string option_id(const CustomizationGroup& g, const std::string& opt) {
    return "opt-" + g.name + "-" + opt;
  }

  static CartState current(const CatalogItem& item, const Url& url) {
    auto cart = default_cart(item);
    for (const auto& g : item.groups) {
      auto v = url.get(g.name);
      if (v && std::find(g.options.begin(), g.options.end(), *v) != g.options.end()) {
        cart.options[g.name] = *v;
      }
    }
    return cart;
  }

  std::string cart_destination_;
};

struct AddressField {
  const char* key;
  const char* label;
};

constexpr AddressField kAddressFields[] = {{"name", "Name"},
                                           {"street", "Street"},
                                           {"city", "City"},
                                           {"state", "State"},
                                           {"zip", "Zip"}};

class CheckoutPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), "Checkout");
    b.heading("Checkout");
    auto cart = cart_param(url);
    if (!cart) {
      b.paragraph("Your cart is empty.");
      return std::move(b).build();
    }
    render_cart(b, *cart);
    b.heading("Shipping address", 3);
    b.raw("<form>\n");
    for (const auto& f : kAddressFields) {
      b.element(make_element(std::string("ship-") + f.key, "type/text", f.label,
                             url.get_or(f.key, "")));
    }
    b.element(make_element("place-order", "click/button", "Place order"));
    b.raw("</form>\n");
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand& cmd,
                const ElementManifest& target) const override {
    auto cart = cart_param(url);
    if (!cart) return {url, {}, false};
    for (const auto& f : kAddressFields) {
      if (std::string("ship-") + f.key != target.element_id) continue;
      Url next = url;
      next.set(f.key, cmd.payload);
      return {next,
              {log_entry("type/text", std::string(f.label) + "=" + cmd.payload,
                         target.element_id)},
              false};
    }
    if (target.element_id == "place-order") {
      ShippingAddress address{url.get_or("name", ""), url.get_or("street", ""),
                              url.get_or("city", ""), url.get_or("state", ""),
                              url.get_or("zip", "")};
      std::string summary;
      for (const auto& f : kAddressFields) {
        if (!summary.empty()) summary += "; ";
        summary += std::string(f.label) + "=" + url.get_or(f.key, "");
      }
      Url next("/thanks");
      next.set("cart", cart_json(*cart));
      next.set("shipping", shipping_value(address));
      return {next,
              {log_entry("click/button", "Place order", "place-order"),
               log_entry("fill/complexform", summary)},
              true};
    }
    return {url, {}, false};
  }
};

class ConfirmationPage : public Page {
 public:
  ConfirmationPage(std::string title, std::string message)
      : title_(std::move(title)), message_(std::move(message)) {}

  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), title_);
    b.heading(title_);
    if (auto cart = cart_param(url)) {
      b.paragraph(message_);
      render_cart(b, *cart);
    } else {
      b.paragraph("Nothing here yet.");
    }
    if (auto shipping = url.get("shipping")) {
      if (auto address = parse_shipping_value(*shipping)) {
        b.paragraph("Shipping to " + address->name + ", " + address->street + ", " +
                    address->city + ", " + address->state + " " + address->zip);
      }
    }
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand&,
                const ElementManifest&) const override {
    return {url, {}, false};
  }

 private:
  std::string title_;
  std::string message_;
};

class ShopSite : public Site {
 public:
  explicit ShopSite(std::string cart_destination)
      : item_(std::move(cart_destination)),
        thanks_("Thank you", "Your order has been placed."),
        cart_("Cart", "Your cart contains:") {}

  const Page* route(const Url& url) const override {
    const auto& p = url.path();
    if (p == "/") return &home_;
    if (p == "/search") return &search_;
    if (p == "/item") return &item_;
    if (p == "/checkout") return &checkout_;
    if (p == "/thanks") return &thanks_;
    if (p == "/cart") return &cart_;
    return nullptr;
  }

 private:
  HomePage home_;
  SearchPage search_;
  ItemPage item_;
  CheckoutPage checkout_;
  ConfirmationPage thanks_;
  ConfirmationPage cart_;
};

}  // namespace

std::unique_ptr<Site> make_shop_site(std::string cart_destination) {
  return std::make_unique<ShopSite>(std::move(cart_destination));
}

}  // namespace websuite::pages
