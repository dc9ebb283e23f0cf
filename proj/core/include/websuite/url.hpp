#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace websuite {

/// RFC 3986 percent-encoding: everything but unreserved characters is
/// escaped with uppercase hex.
std::string percent_encode(std::string_view raw);

/// Strict decoding; returns nullopt on a truncated or non-hex escape.
std::optional<std::string> percent_decode(std::string_view encoded);

/// A site-relative location such as `/search?query=macbook`. Query values
/// are held decoded; serialization preserves insertion order so pages can
/// emit a canonical parameter order.
class Url {
 public:
  Url() = default;
  explicit Url(std::string path) : path_(std::move(path)) {}

  /// Returns nullopt when the path is not absolute or an escape is invalid.
  static std::optional<Url> parse(std::string_view text);

  const std::string& path() const { return path_; }
  const std::vector<std::pair<std::string, std::string>>& params() const {
    return params_;
  }

  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;
  bool has(std::string_view key) const { return get(key).has_value(); }

  Url& set(std::string_view key, std::string value);
  Url& erase(std::string_view key);

  std::string str() const;

 private:
  std::string path_;
  std::vector<std::pair<std::string, std::string>> params_;
};

}  // namespace websuite
