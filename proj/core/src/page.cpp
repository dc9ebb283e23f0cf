#include "websuite/page.hpp"

#include <array>

#include <nlohmann/json.hpp>

#include "websuite/errors.hpp"

namespace websuite {

namespace {

constexpr std::array<std::pair<Verb, std::string_view>, 8> kVerbs = {{
    {Verb::kClick, "click"},
    {Verb::kType, "type"},
    {Verb::kSelect, "select"},
    {Verb::kHover, "hover"},
    {Verb::kDrag, "drag"},
    {Verb::kNavigate, "navigate"},
    {Verb::kSubmit, "submit"},
    {Verb::kStop, "stop"},
}};

std::string attr(std::string_view name, std::string_view value) {
  return " " + std::string(name) + "=\"" + html_escape(value) + "\"";
}

std::string element_html(const ElementManifest& e) {
  const auto& k = e.kind;
  std::string base = attr("id", e.element_id) + attr("data-ref", format_ref(k));
  auto label = html_escape(e.label);
  if (k.action == "Type") {
    std::string type = k.interaction == "Date"    ? "date"
                       : k.interaction == "Phone" ? "tel"
                                                  : "text";
    return "<label for=\"" + html_escape(e.element_id) + "\">" + label +
           "</label><input type=\"" + type + "\"" + base +
           attr("value", e.state) + ">";
  }
  if (k.action == "Select" && k.interaction == "Select") {
    std::string out = "<label>" + label + " <select" + base +
                      attr("aria-label", e.label) + ">";
    for (const auto& opt : e.options) {
      out += "<option" + std::string(opt == e.state ? " selected" : "") + ">" +
             html_escape(opt) + "</option>";
    }
    return out + "</select></label>";
  }
  if (k.action == "Select" || k.interaction == "Switch") {
    bool on = e.state == "checked" || e.state == "selected" || e.state == "on";
    std::string role = k.interaction == "Switch" ? attr("role", "switch") : "";
    return "<label><input type=\"checkbox\"" + base + role +
           std::string(on ? " checked" : "") + "> " + label + "</label>";
  }
  if (k.interaction == "Slider") {
    std::string range;
    if (e.options.size() == 2) {
      range = attr("min", e.options[0]) + attr("max", e.options[1]);
    }
    return "<label>" + label + " <input type=\"range\"" + base + range +
           attr("value", e.state) + attr("aria-label", e.label) + "></label>";
  }
  if (k.interaction == "Link") {
    return "<a href=\"#\"" + base + ">" + label + "</a>";
  }
  if (k.action == "NavigateMenu") {
    return "<a role=\"menuitem\" href=\"#\"" + base + ">" + label + "</a>";
  }
  if (k.interaction == "IconButton") {
    return "<button" + base + attr("aria-label", e.label) +
           "><span class=\"icon\" aria-hidden=\"true\"></span></button>";
  }
  if (k.interaction == "Accordion") {
    return "<button" + base +
           attr("aria-expanded", e.state == "expanded" ? "true" : "false") +
           ">" + label + "</button>";
  }
  return "<button" + base + ">" + label + "</button>";
}

}  // namespace

std::string_view verb_name(Verb verb) {
  for (const auto& [v, name] : kVerbs) {
    if (v == verb) return name;
  }
  return "";
}

std::optional<Verb> verb_from_name(std::string_view name) {
  for (const auto& [v, n] : kVerbs) {
    if (n == name) return v;
  }
  return std::nullopt;
}

void validate_command_shape(const ActionCommand& cmd) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kIncompatibleVerb,
                std::string(verb_name(cmd.verb)) + ": " + why);
  };
  switch (cmd.verb) {
    case Verb::kClick:
    case Verb::kHover:
    case Verb::kSubmit:
      if (cmd.target.empty()) fail("requires a target");
      if (!cmd.payload.empty()) fail("takes no payload");
      break;
    case Verb::kType:
    case Verb::kSelect:
    case Verb::kDrag:
      if (cmd.target.empty()) fail("requires a target");
      if (cmd.payload.empty()) fail("requires a payload");
      break;
    case Verb::kNavigate:
      if (!cmd.target.empty()) fail("takes no target");
      if (cmd.payload.empty()) fail("requires a path payload");
      break;
    case Verb::kStop:
      break;
  }
}

bool verb_applies(Verb verb, const InteractionRef& kind) {
  const auto& a = kind.action;
  const auto& i = kind.interaction;
  switch (verb) {
    case Verb::kClick:
      return (a == "Click" && i != "Slider") || a == "NavigateMenu" ||
             (a == "Select" && i != "Select");
    case Verb::kSubmit:
      return a == "Click" && i == "Button";
    case Verb::kType:
      return a == "Type";
    case Verb::kSelect:
      return a == "Select" && i == "Select";
    case Verb::kDrag:
      return a == "Click" && i == "Slider";
    case Verb::kHover:
      return true;
    case Verb::kNavigate:
    case Verb::kStop:
      return false;
  }
  return false;
}

const ElementManifest* PageDoc::find(std::string_view element_id) const {
  for (const auto& e : elements) {
    if (e.element_id == element_id) return &e;
  }
  return nullptr;
}

std::string html_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

PageBuilder::PageBuilder(std::string path, std::string title) {
  doc_.path = std::move(path);
  doc_.title = std::move(title);
}

PageBuilder& PageBuilder::heading(std::string_view text, int level) {
  auto tag = "h" + std::to_string(level);
  html_ += "<" + tag + ">" + html_escape(text) + "</" + tag + ">\n";
  return *this;
}

PageBuilder& PageBuilder::paragraph(std::string_view text) {
  html_ += "<p>" + html_escape(text) + "</p>\n";
  return *this;
}

PageBuilder& PageBuilder::raw(std::string_view html) {
  html_ += html;
  return *this;
}

PageBuilder& PageBuilder::element(ElementManifest element) {
  html_ += element_html(element) + "\n";
  doc_.elements.push_back(std::move(element));
  return *this;
}

PageDoc PageBuilder::build() && {
  doc_.body_html = "<main>\n" + html_ + "</main>\n";
  return std::move(doc_);
}

nlohmann::json to_json(const ElementManifest& e) {
  nlohmann::json j = {{"element_id", e.element_id},
                      {"kind", format_ref(e.kind)},
                      {"label", e.label},
                      {"state", e.state}};
  if (!e.options.empty()) j["options"] = e.options;
  return j;
}

nlohmann::json to_json(const PageDoc& page) {
  auto elements = nlohmann::json::array();
  for (const auto& e : page.elements) elements.push_back(to_json(e));
  return {{"path", page.path},
          {"title", page.title},
          {"body_html", page.body_html},
          {"elements", elements}};
}

nlohmann::json to_json(const ActionCommand& cmd) {
  nlohmann::json j = {{"verb", verb_name(cmd.verb)}};
  if (!cmd.target.empty()) j["target"] = cmd.target;
  if (!cmd.payload.empty()) j["payload"] = cmd.payload;
  return j;
}

PageDoc page_from_json(const nlohmann::json& doc) {
  PageDoc page;
  page.path = doc.at("path").get<std::string>();
  page.title = doc.value("title", std::string{});
  page.body_html = doc.value("body_html", std::string{});
  for (const auto& e : doc.value("elements", nlohmann::json::array())) {
    ElementManifest m;
    m.element_id = e.at("element_id").get<std::string>();
    m.kind = parse_ref(e.at("kind").get<std::string>());
    m.label = e.value("label", std::string{});
    m.state = e.value("state", std::string{});
    m.options = e.value("options", std::vector<std::string>{});
    page.elements.push_back(std::move(m));
  }
  return page;
}

ActionCommand command_from_json(const nlohmann::json& doc) {
  auto bad = [](const std::string& why) {
    return Error(ErrorCode::kAgentError, "malformed command: " + why);
  };
  if (!doc.is_object()) throw bad("not an object");
  auto verb_it = doc.find("verb");
  if (verb_it == doc.end() || !verb_it->is_string()) throw bad("missing verb");
  auto verb = verb_from_name(verb_it->get<std::string>());
  if (!verb) throw bad("unknown verb '" + verb_it->get<std::string>() + "'");
  ActionCommand cmd{*verb, {}, {}};
  for (auto [key, field] : {std::pair{"target", &cmd.target},
                            std::pair{"payload", &cmd.payload}}) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) continue;
    if (!it->is_string()) throw bad(std::string(key) + " must be a string");
    *field = it->get<std::string>();
  }
  return cmd;
}

}  // namespace websuite
