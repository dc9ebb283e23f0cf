#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "websuite/logmodel.hpp"
#include "websuite/page.hpp"
#include "websuite/url.hpp"

namespace websuite::pages {

/// Result of applying one command to a page state. Page state lives entirely
/// in the URL; `navigated` distinguishes a real navigation (logged as `nav`)
/// from an in-place state update.
struct Outcome {
  Url url;
  std::vector<LogEntry> entries;
  bool navigated = false;
};

class Page {
 public:
  virtual ~Page() = default;

  virtual PageDoc render(const Url& url) const = 0;
  virtual Outcome apply(const Url& url, const ActionCommand& cmd,
                        const ElementManifest& target) const = 0;
  /// Hovering changes nothing unless a page reveals content on hover.
  virtual Outcome hover(const Url& url, const ElementManifest& target) const;
  virtual std::optional<std::map<std::string, std::string>> submitted(
      const Url&) const {
    return std::nullopt;
  }
};

/// A set of pages reachable within one task.
class Site {
 public:
  virtual ~Site() = default;
  /// nullptr when `url` is not part of this site.
  virtual const Page* route(const Url& url) const = 0;
};

/// `/ind/<action>?test=<variant>`; nullptr for an unknown variant.
std::unique_ptr<Site> make_individual_site(std::string_view start_path);

/// The shopping playground. `cart_destination` is where the item page's
/// "Add to cart" leads (`/checkout` or `/cart`).
std::unique_ptr<Site> make_shop_site(std::string cart_destination);

// helpers shared by the page implementations

LogEntry log_entry(std::string_view ref_path, std::string payload,
                   std::string element_id = {});

ElementManifest make_element(std::string id, std::string_view ref_path,
                             std::string label, std::string state = {},
                             std::vector<std::string> options = {});

std::vector<std::string> split_list(std::string_view csv);
std::string join_list(const std::vector<std::string>& items);

[[noreturn]] void incompatible(const std::string& why);

}  // namespace websuite::pages
