#include "websuite/url.hpp"

#include <algorithm>

namespace websuite {

namespace {

bool unreserved(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_' ||
         c == '~';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

std::string percent_encode(std::string_view raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (unreserved(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::optional<std::string> percent_decode(std::string_view encoded) {
  std::string out;
  out.reserve(encoded.size());
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    char c = encoded[i];
    if (c == '%') {
      if (i + 2 >= encoded.size()) return std::nullopt;
      int hi = hex_value(encoded[i + 1]);
      int lo = hex_value(encoded[i + 2]);
      if (hi < 0 || lo < 0) return std::nullopt;
      out.push_back(static_cast<char>((hi << 4) | lo));
      i += 2;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::optional<Url> Url::parse(std::string_view text) {
  if (text.empty() || text.front() != '/') return std::nullopt;
  Url url;
  auto q = text.find('?');
  auto path = text.substr(0, q);
  auto decoded_path = percent_decode(path);
  if (!decoded_path) return std::nullopt;
  url.path_ = *decoded_path;
  if (q == std::string_view::npos) return url;
  auto query = text.substr(q + 1);
  while (!query.empty()) {
    auto amp = query.find('&');
    auto pair = query.substr(0, amp);
    if (!pair.empty()) {
      auto eq = pair.find('=');
      auto key = percent_decode(pair.substr(0, eq));
      auto value = eq == std::string_view::npos
                       ? std::optional<std::string>("")
                       : percent_decode(pair.substr(eq + 1));
      if (!key || !value) return std::nullopt;
      url.params_.emplace_back(std::move(*key), std::move(*value));
    }
    if (amp == std::string_view::npos) break;
    query.remove_prefix(amp + 1);
  }
  return url;
}

std::optional<std::string> Url::get(std::string_view key) const {
  for (const auto& [k, v] : params_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string Url::get_or(std::string_view key, std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

Url& Url::set(std::string_view key, std::string value) {
  for (auto& [k, v] : params_) {
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  }
  params_.emplace_back(std::string(key), std::move(value));
  return *this;
}

Url& Url::erase(std::string_view key) {
  std::erase_if(params_, [&](const auto& kv) { return kv.first == key; });
  return *this;
}

std::string Url::str() const {
  std::string out = path_;
  char sep = '?';
  for (const auto& [k, v] : params_) {
    out.push_back(sep);
    out += percent_encode(k);
    out.push_back('=');
    out += percent_encode(v);
    sep = '&';
  }
  return out;
}

}  // namespace websuite
