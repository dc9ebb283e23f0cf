#include <algorithm>
#include <charconv>
#include <functional>

#include "pages.hpp"
#include "websuite/errors.hpp"

namespace websuite::pages {

Outcome Page::hover(const Url& url, const ElementManifest&) const { return {url, {}, false}; }

LogEntry log_entry(std::string_view ref_path, std::string payload,
                   std::string element_id) {
  LogEntry e;
  e.ref = parse_ref(ref_path);
  e.payload = std::move(payload);
  e.element_id = std::move(element_id);
  return e;
}

ElementManifest make_element(std::string id, std::string_view ref_path,
                             std::string label, std::string state,
                             std::vector<std::string> options) {
  return {std::move(id), parse_ref(ref_path), std::move(label),
          std::move(state), std::move(options)};
}

std::vector<std::string> split_list(std::string_view csv) {
  std::vector<std::string> out;
  while (!csv.empty()) {
    auto comma = csv.find(',');
    auto item = csv.substr(0, comma);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    csv.remove_prefix(comma + 1);
  }
  return out;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out.push_back(',');
    out += item;
  }
  return out;
}

void incompatible(const std::string& why) {
  throw Error(ErrorCode::kIncompatibleVerb, why);
}

namespace {

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Toggles `key` in the comma list stored under `param`; returns true when the
// key is now present.
bool toggle_in_list(Url& url, std::string_view param, const std::string& key) {
  auto list = split_list(url.get_or(param, ""));
  bool now_on = !contains(list, key);
  if (now_on) {
    list.push_back(key);
    std::sort(list.begin(), list.end());
  } else {
    std::erase(list, key);
  }
  if (list.empty()) {
    url.erase(param);
  } else {
    url.set(param, join_list(list));
  }
  return now_on;
}

Outcome unchanged(const Url& url, std::vector<LogEntry> entries = {}) {
  return {url, std::move(entries), false};
}

// ---------------------------------------------------------------------------
// Forms: typed fields, selects and checkboxes whose values live in the query.

struct Field {
  enum class Kind { kText, kDate, kPhone, kSelect, kCheckbox, kMulticheck };
  std::string key;
  std::string element_id;
  std::string label;
  Kind kind = Kind::kText;
  std::vector<std::string> options;  // kSelect
  std::string default_value;

  std::string ref_path() const {
    switch (kind) {
      case Kind::kText: return "type/text";
      case Kind::kDate: return "type/date";
      case Kind::kPhone: return "type/phone";
      case Kind::kSelect: return "select/select";
      case Kind::kCheckbox: return "select/checkbox";
      case Kind::kMulticheck: return "select/multicheck";
    }
    return "";
  }
  bool is_toggle() const {
    return kind == Kind::kCheckbox || kind == Kind::kMulticheck;
  }
  std::string value(const Url& url) const {
    if (is_toggle()) return url.get_or(key, "unchecked");
    return url.get_or(key, default_value);
  }
};

class Form {
 public:
  Form(std::vector<Field> fields, std::string submit_id = {},
       std::string submit_label = {}, std::string composite_ref = {})
      : fields_(std::move(fields)),
        submit_id_(std::move(submit_id)),
        submit_label_(std::move(submit_label)),
        composite_ref_(std::move(composite_ref)) {}

  void render(PageBuilder& b, const Url& url) const {
    b.raw("<form>\n");
    for (const auto& f : fields_) {
      b.element(make_element(f.element_id, f.ref_path(), f.label, f.value(url),
                             f.options));
    }
    if (!submit_id_.empty()) {
      b.element(make_element(submit_id_, "click/button", submit_label_));
    }
    b.raw("</form>\n");
    if (url.get("submitted") == "1") b.paragraph("Thank you, your response was submitted.");
  }

  std::optional<Outcome> apply(const Url& url, const ActionCommand& cmd,
                               const ElementManifest& target) const {
    if (!submit_id_.empty() && target.element_id == submit_id_) {
      Outcome out{url, {}, true};
      out.entries.push_back(log_entry("click/button", submit_label_, submit_id_));
      if (!composite_ref_.empty()) {
        out.entries.push_back(log_entry(composite_ref_, summary(url)));
      }
      out.url.set("submitted", "1");
      return out;
    }
    for (const auto& f : fields_) {
      if (f.element_id != target.element_id) continue;
      Url next = url;
      std::string logged;
      if (f.is_toggle()) {
        logged = f.value(url) == "checked" ? "unchecked" : "checked";
        if (logged == "checked") {
          next.set(f.key, logged);
        } else {
          next.erase(f.key);
        }
      } else if (f.kind == Field::Kind::kSelect) {
        if (!contains(f.options, cmd.payload)) {
          incompatible("'" + cmd.payload + "' is not an option of " + f.label);
        }
        logged = cmd.payload;
        next.set(f.key, cmd.payload);
      } else {
        logged = cmd.payload;
        next.set(f.key, cmd.payload);
      }
      return Outcome{next,
                     {log_entry(f.ref_path(), f.label + "=" + logged,
                                f.element_id)},
                     false};
    }
    return std::nullopt;
  }

  std::map<std::string, std::string> values(const Url& url) const {
    std::map<std::string, std::string> out;
    for (const auto& f : fields_) out[f.label] = f.value(url);
    return out;
  }

  std::optional<std::map<std::string, std::string>> submitted(
      const Url& url) const {
    if (url.get("submitted") != "1") return std::nullopt;
    return values(url);
  }

 private:
  std::string summary(const Url& url) const {
    std::string out;
    for (const auto& f : fields_) {
      if (!out.empty()) out += "; ";
      out += f.label + "=" + f.value(url);
    }
    return out;
  }

  std::vector<Field> fields_;
  std::string submit_id_;
  std::string submit_label_;
  std::string composite_ref_;
};

class FormPage : public Page {
 public:
  FormPage(std::string title, std::string intro, Form form)
      : title_(std::move(title)), intro_(std::move(intro)), form_(std::move(form)) {}

  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), title_);
    b.heading(title_);
    if (!intro_.empty()) b.paragraph(intro_);
    form_.render(b, url);
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand& cmd,
                const ElementManifest& target) const override {
    if (auto out = form_.apply(url, cmd, target)) return *out;
    return unchanged(url);
  }

  std::optional<std::map<std::string, std::string>> submitted(
      const Url& url) const override {
    return form_.submitted(url);
  }

 private:
  std::string title_;
  std::string intro_;
  Form form_;
};

Form answer_form(std::string composite_ref) {
  return Form({{"answer", "ans-answer", "Answer", Field::Kind::kText, {}, ""}},
              "ans-submit", "Submit answer", std::move(composite_ref));
}

// ---------------------------------------------------------------------------
// Click pages

struct Labeled {
  std::string key;
  std::string element_id;
  std::string label;
  std::string content;
};

/// Buttons (or icon buttons) that only log when clicked.
class ButtonsPage : public Page {
 public:
  ButtonsPage(std::string title, std::string ref_path,
              std::vector<Labeled> buttons)
      : title_(std::move(title)), ref_(std::move(ref_path)), buttons_(std::move(buttons)) {}

  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), title_);
    b.heading(title_);
    auto last = url.get("last");
    for (const auto& btn : buttons_) {
      b.element(make_element(btn.element_id, ref_, btn.label));
    }
    if (last) {
      for (const auto& btn : buttons_) {
        if (btn.key == *last) b.paragraph(btn.content);
      }
    }
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand&,
                const ElementManifest& target) const override {
    for (const auto& btn : buttons_) {
      if (btn.element_id == target.element_id) {
        Url next = url;
        next.set("last", btn.key);
        return {next, {log_entry(ref_, btn.label, btn.element_id)}, false};
      }
    }
    return unchanged(url);
  }

 private:
  std::string title_;
  std::string ref_;
  std::vector<Labeled> buttons_;
};

/// Accordion sections whose content is only rendered while expanded.
/// With `answer_ref` set, the page also carries an answer form.
class AccordionPage : public Page {
 public:
  AccordionPage(std::string title, std::vector<Labeled> sections,
                std::optional<Form> answer = std::nullopt)
      : title_(std::move(title)), sections_(std::move(sections)), answer_(std::move(answer)) {}

  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), title_);
    b.heading(title_);
    auto open = split_list(url.get_or("open", ""));
    for (const auto& s : sections_) {
      bool expanded = contains(open, s.key);
      b.raw("<section class=\"accordion\">\n");
      b.element(make_element(s.element_id, "click/accordion", s.label,
                             expanded ? "expanded" : "collapsed"));
      if (expanded) b.paragraph(s.content);
      b.raw("</section>\n");
    }
    if (answer_) answer_->render(b, url);
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand& cmd,
                const ElementManifest& target) const override {
    for (const auto& s : sections_) {
      if (s.element_id == target.element_id) {
        Url next = url;
        toggle_in_list(next, "open", s.key);
        return {next, {log_entry("click/accordion", s.label, s.element_id)}, false};
      }
    }
    if (answer_) {
      if (auto out = answer_->apply(url, cmd, target)) return *out;
    }
    return unchanged(url);
  }

  std::optional<std::map<std::string, std::string>> submitted(
      const Url& url) const override {
    return answer_ ? answer_->submitted(url) : std::nullopt;
  }

 private:
  std::string title_;
  std::vector<Labeled> sections_;
  std::optional<Form> answer_;
};

/// A page whose dialog is open until one of its buttons is pressed.
class ConfirmDialogPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), "Files");
    b.heading("Files");
    b.paragraph("quarterly-report.pdf");
    auto result = url.get("result");
    if (!result) {
      b.raw("<div role=\"dialog\" aria-modal=\"true\">\n");
      b.paragraph("Delete quarterly-report.pdf? This cannot be undone.");
      b.element(make_element("dlg-cancel", "click/dialogbutton", "Cancel"));
      b.element(make_element("dlg-delete", "click/dialogbutton", "Delete"));
      b.raw("</div>\n");
    } else {
      b.paragraph(*result == "delete" ? "The file was deleted."
                                      : "Deletion cancelled.");
    }
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand&,
                const ElementManifest& target) const override {
    Url next = url;
    next.set("result", target.element_id == "dlg-delete" ? "delete" : "cancel");
    return {next, {log_entry("click/dialogbutton", target.label, target.element_id)},
            false};
  }
};

class DropdownPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), "Document");
    b.heading("Project plan.docx");
    bool open = url.get("menu") == "open";
    b.element(make_element("dd-options", "click/dropdownmenu", "Options",
                           open ? "open" : "closed"));
    if (open) {
      b.raw("<ul role=\"menu\">\n");
      for (const auto& [id, label] : kItems) {
        b.element(make_element(id, "click/dropdownmenu", label));
      }
      b.raw("</ul>\n");
    }
    if (auto chosen = url.get("chosen")) b.paragraph("Last action: " + *chosen);
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand&,
                const ElementManifest& target) const override {
    Url next = url;
    if (target.element_id == "dd-options") {
      if (url.get("menu") == "open") {
        next.erase("menu");
      } else {
        next.set("menu", "open");
      }
    } else {
      next.erase("menu");
      next.set("chosen", target.label);
    }
    return {next, {log_entry("click/dropdownmenu", target.label, target.element_id)},
            false};
  }

 private:
  static constexpr std::pair<const char*, const char*> kItems[] = {
      {"dd-rename", "Rename"}, {"dd-duplicate", "Duplicate"}, {"dd-delete", "Delete"}};
};

class LinksPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    auto page = url.get("page");
    PageBuilder b(url.str(), page ? "Acme - " + *page : "Acme");
    b.heading(page ? title_for(*page) : "Welcome to Acme");
    b.raw("<nav>\n");
    for (const auto& l : kLinks) b.element(make_element(l.element_id, "click/link", l.label));
    b.raw("</nav>\n");
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand&,
                const ElementManifest& target) const override {
    for (const auto& l : kLinks) {
      if (l.element_id == target.element_id) {
        Url next = url;
        next.set("page", l.key);
        return {next, {log_entry("click/link", l.label, l.element_id)}, true};
      }
    }
    return unchanged(url);
  }

 private:
  static std::string title_for(const std::string& key) {
    for (const auto& l : kLinks) {
      if (l.key == key) return l.label;
    }
    return "Not found";
  }
  inline static const Labeled kLinks[] = {{"pricing", "ln-pricing", "Pricing", ""},
                                          {"about", "ln-about", "About us", ""},
                                          {"contact", "ln-contact", "Contact", ""}};
};

class SliderPage : public Page {
 public:
  SliderPage(std::string title, std::string label, int min, int max, int initial)
      : title_(std::move(title)), label_(std::move(label)), min_(min), max_(max), initial_(initial) {}

  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), title_);
    b.heading(title_);
    b.element(make_element("sl-" + label_, "click/slider", label_,
                           std::to_string(value(url)),
                           {std::to_string(min_), std::to_string(max_)}));
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand& cmd,
                const ElementManifest& target) const override {
    int v = 0;
    auto [p, ec] = std::from_chars(cmd.payload.data(),
                                   cmd.payload.data() + cmd.payload.size(), v);
    if (ec != std::errc() || p != cmd.payload.data() + cmd.payload.size()) {
      incompatible("drag payload must be an integer value");
    }
    v = std::clamp(v, min_, max_);
    Url next = url;
    next.set("value", std::to_string(v));
    return {next,
            {log_entry("click/slider", label_ + "=" + std::to_string(v),
                       target.element_id)},
            false};
  }

 private:
  int value(const Url& url) const {
    auto raw = url.get_or("value", "");
    int v = initial_;
    std::from_chars(raw.data(), raw.data() + raw.size(), v);
    return std::clamp(v, min_, max_);
  }

  std::string title_;
  std::string label_;
  int min_, max_, initial_;
};

class SwitchPage : public Page {
 public:
  struct Switch {
    std::string key;
    std::string label;
    bool initially_on;
  };

  SwitchPage(std::string title, std::vector<Switch> switches)
      : title_(std::move(title)), switches_(std::move(switches)) {}

  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), title_);
    b.heading(title_);
    for (const auto& s : switches_) {
      b.element(make_element("sw-" + s.key, "click/switch", s.label,
                             is_on(url, s) ? "on" : "off"));
    }
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand&,
                const ElementManifest& target) const override {
    for (const auto& s : switches_) {
      if ("sw-" + s.key != target.element_id) continue;
      bool now_on = !is_on(url, s);
      Url next = url;
      next.set(s.key, now_on ? "on" : "off");
      return {next,
              {log_entry("click/switch", s.label + (now_on ? "=on" : "=off"),
                         target.element_id)},
              false};
    }
    return unchanged(url);
  }

 private:
  static bool is_on(const Url& url, const Switch& s) {
    auto v = url.get(s.key);
    return v ? *v == "on" : s.initially_on;
  }

  std::string title_;
  std::vector<Switch> switches_;
};

class SnackbarPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), "Inbox");
    b.heading("Inbox");
    auto status = url.get("snackbar");
    b.paragraph(status == "undone" ? "Weekly team sync - 1 message"
                                   : "No messages");
    if (!status) {
      b.raw("<div role=\"status\" class=\"snackbar\">\n");
      b.paragraph("Message archived");
      b.element(make_element("sb-undo", "click/snackbar", "Undo"));
      b.element(make_element("sb-dismiss", "click/snackbar", "Dismiss"));
      b.raw("</div>\n");
    }
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand&,
                const ElementManifest& target) const override {
    Url next = url;
    next.set("snackbar", target.element_id == "sb-undo" ? "undone" : "dismissed");
    return {next, {log_entry("click/snackbar", target.label, target.element_id)},
            false};
  }
};

// ---------------------------------------------------------------------------
// Select pages

class GridRowPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), "Orders");
    b.heading("Orders");
    auto selected = split_list(url.get_or("selected", ""));
    b.raw("<table role=\"grid\">\n<tr><th></th><th>Order</th><th>Customer</th><th>Total</th></tr>\n");
    for (const auto& [order, customer, total] : kRows) {
      b.raw("<tr><td>");
      b.element(make_element("row-" + std::string(order), "select/datagridrow",
                             "Order " + std::string(order),
                             contains(selected, order) ? "selected" : "unselected"));
      b.raw("</td><td>" + std::string(order) + "</td><td>" + html_escape(customer) +
            "</td><td>" + total + "</td></tr>\n");
    }
    b.raw("</table>\n");
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand&,
                const ElementManifest& target) const override {
    auto order = target.element_id.substr(4);
    Url next = url;
    bool on = toggle_in_list(next, "selected", order);
    return {next,
            {log_entry("select/datagridrow",
                       target.label + (on ? "=selected" : "=unselected"),
                       target.element_id)},
            false};
  }

 private:
  static constexpr std::tuple<const char*, const char*, const char*> kRows[] = {
      {"1001", "Acme Corp", "$120.00"},
      {"1002", "Baltic Traders", "$89.50"},
      {"1003", "Maple Goods", "$342.10"},
      {"1004", "Lone Star Supply", "$15.99"},
      {"1005", "Pampas Import", "$230.00"}};
};

// ---------------------------------------------------------------------------
// Menus

class BasicMenuPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    auto page = url.get_or("page", "home");
    PageBuilder b(url.str(), "Portal - " + page);
    b.raw("<nav role=\"menubar\">\n");
    for (const auto& [key, label] : kItems) {
      b.element(make_element("mn-" + std::string(key), "navigatemenu/basicmenu", label));
    }
    b.raw("</nav>\n");
    b.heading(page == "settings" ? "Settings" : page == "profile" ? "Profile" : "Home");
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand&,
                const ElementManifest& target) const override {
    for (const auto& [key, label] : kItems) {
      if ("mn-" + std::string(key) == target.element_id) {
        Url next = url;
        next.set("page", key);
        return {next, {log_entry("navigatemenu/basicmenu", label, target.element_id)},
                true};
      }
    }
    return unchanged(url);
  }

 private:
  static constexpr std::pair<const char*, const char*> kItems[] = {
      {"home", "Home"}, {"profile", "Profile"}, {"settings", "Settings"}};
};

class NestedMenuPage : public Page {
 public:
  struct Group {
    std::string key;
    std::string label;
    std::vector<std::pair<std::string, std::string>> items;
  };

  PageDoc render(const Url& url) const override {
    auto page = url.get("page");
    PageBuilder b(url.str(), "Portal");
    auto open = url.get_or("open", "");
    b.raw("<nav role=\"menubar\">\n");
    for (const auto& g : groups()) {
      b.element(make_element("mn-" + g.key, "navigatemenu/nestedmenu", g.label,
                             open == g.key ? "open" : "closed"));
      if (open == g.key) {
        b.raw("<ul role=\"menu\">\n");
        for (const auto& [key, label] : g.items) {
          b.element(make_element("mn-" + g.key + "-" + key,
                                 "navigatemenu/nestedmenu", label));
        }
        b.raw("</ul>\n");
      }
    }
    b.raw("</nav>\n");
    b.heading(page ? "Page: " + *page : "Home");
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand&,
                const ElementManifest& target) const override {
    for (const auto& g : groups()) {
      if ("mn-" + g.key == target.element_id) {
        Url next = url;
        if (url.get("open") == g.key) {
          next.erase("open");
        } else {
          next.set("open", g.key);
        }
        return {next, {log_entry("navigatemenu/nestedmenu", g.label, target.element_id)},
                false};
      }
      for (const auto& [key, label] : g.items) {
        if ("mn-" + g.key + "-" + key == target.element_id) {
          Url next = url;
          next.erase("open");
          next.set("page", g.key + "-" + key);
          return {next,
                  {log_entry("navigatemenu/nestedmenu", g.label + " > " + label,
                             target.element_id)},
                  true};
        }
      }
    }
    return unchanged(url);
  }

 private:
  static const std::vector<Group>& groups() {
    static const std::vector<Group> kGroups = {
        {"account", "Account", {{"profile", "Profile"}, {"privacy", "Privacy"}}},
        {"help", "Help", {{"faq", "FAQ"}, {"contact", "Contact"}}}};
    return kGroups;
  }
};

// ---------------------------------------------------------------------------
// Find pages

class PlanDialogPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), "Plans");
    b.heading("Choose a plan");
    b.paragraph("Basic, Pro and Enterprise plans are available.");
    b.element(make_element("dlgb-details", "click/dialogbutton", "View plan details"));
    if (url.get("dialog") == "open") {
      b.raw("<div role=\"dialog\">\n");
      b.paragraph("The Pro plan costs $24 per month and includes 5 seats.");
      b.element(make_element("dlgb-close", "click/dialogbutton", "Close"));
      b.raw("</div>\n");
    }
    form_.render(b, url);
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand& cmd,
                const ElementManifest& target) const override {
    if (target.element_id == "dlgb-details" || target.element_id == "dlgb-close") {
      Url next = url;
      if (target.element_id == "dlgb-details") {
        next.set("dialog", "open");
      } else {
        next.erase("dialog");
      }
      return {next, {log_entry("click/dialogbutton", target.label, target.element_id)},
              false};
    }
    if (auto out = form_.apply(url, cmd, target)) return *out;
    return unchanged(url);
  }

  std::optional<std::map<std::string, std::string>> submitted(
      const Url& url) const override {
    return form_.submitted(url);
  }

 private:
  Form form_ = answer_form("find/dialogbutton");
};

class ParagraphsPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), "About Northwind Outfitters");
    b.heading("About Northwind Outfitters");
    b.paragraph("Northwind Outfitters makes durable gear for hikers and climbers.");
    b.paragraph("The company was founded in 1987 in Portland, Oregon, by two "
                "former park rangers.");
    b.paragraph("Today it employs 340 people across 12 stores.");
    form_.render(b, url);
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand& cmd,
                const ElementManifest& target) const override {
    if (auto out = form_.apply(url, cmd, target)) return *out;
    return unchanged(url);
  }

  std::optional<std::map<std::string, std::string>> submitted(
      const Url& url) const override {
    return form_.submitted(url);
  }

 private:
  Form form_ = answer_form("find/paragraphs");
};

/// Tooltip text is only present after hovering its info icon.
class TooltipPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), "Your plan");
    b.heading("Your plan");
    auto shown = url.get_or("tooltip", "");
    for (const auto& t : kTips) {
      b.raw("<div>" + html_escape(t.label) + " ");
      b.element(make_element(t.element_id, "click/iconbutton", t.label));
      if (shown == t.key) {
        b.raw("<span role=\"tooltip\">" + html_escape(t.content) + "</span>");
      }
      b.raw("</div>\n");
    }
    form_.render(b, url);
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand& cmd,
                const ElementManifest& target) const override {
    for (const auto& t : kTips) {
      if (t.element_id != target.element_id) continue;
      return unchanged(url, {log_entry("click/iconbutton", t.label, t.element_id)});
    }
    if (auto out = form_.apply(url, cmd, target)) return *out;
    return unchanged(url);
  }

  Outcome hover(const Url& url, const ElementManifest& target) const override {
    for (const auto& t : kTips) {
      if (t.element_id != target.element_id) continue;
      Url next = url;
      next.set("tooltip", t.key);
      return unchanged(next);
    }
    return unchanged(url);
  }

  std::optional<std::map<std::string, std::string>> submitted(
      const Url& url) const override {
    return form_.submitted(url);
  }

 private:
  inline static const Labeled kTips[] = {
      {"storage", "tip-storage", "Storage details",
       "Your plan includes 50 GB of cloud storage."},
      {"support", "tip-support", "Support details",
       "Support is available 24/7 by chat."}};
  Form form_ = answer_form("find/tooltip");
};

// ---------------------------------------------------------------------------
// Filter pages

struct OrderRow {
  const char* order;
  const char* name;
  const char* country;
  const char* total;  // sortable, fixed width
};

constexpr OrderRow kOrders[] = {
    {"1001", "Acme Corp", "USA", "120.00"},
    {"1002", "Baltic Traders", "Latvia", "89.50"},
    {"1003", "Maple Goods", "Canada", "342.10"},
    {"1004", "Lone Star Supply", "USA", "15.99"},
    {"1005", "Pampas Import", "Argentina", "230.00"},
    {"1006", "USA Fabrics Ltd", "United Kingdom", "77.25"},
};

std::string column_value(const OrderRow& row, std::string_view column) {
  if (column == "Order") return row.order;
  if (column == "Name") return row.name;
  if (column == "Country") return row.country;
  return row.total;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

void render_rows(PageBuilder& b, const std::vector<const OrderRow*>& rows) {
  b.raw("<table role=\"grid\">\n<tr><th>Order</th><th>Name</th><th>Country</th><th>Total</th></tr>\n");
  for (const auto* r : rows) {
    b.raw("<tr><td>" + std::string(r->order) + "</td><td>" + html_escape(r->name) +
          "</td><td>" + html_escape(r->country) + "</td><td>$" + r->total +
          "</td></tr>\n");
  }
  b.raw("</table>\n");
}

class FilterGridPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), "Orders");
    b.heading("Orders");
    auto column = url.get_or("column", "Name");
    auto value = url.get_or("value", "");
    b.element(make_element("fl-column", "select/select", "Filter column", column,
                           {"Name", "Country", "Order"}));
    b.raw("<span>contains</span>\n");
    b.element(make_element("fl-value", "type/text", "Filter value", value));
    std::vector<const OrderRow*> rows;
    for (const auto& r : kOrders) {
      if (value.empty() ||
          lower(column_value(r, column)).find(lower(value)) != std::string::npos) {
        rows.push_back(&r);
      }
    }
    render_rows(b, rows);
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand& cmd,
                const ElementManifest& target) const override {
    Url next = url;
    Outcome out{url, {}, false};
    if (target.element_id == "fl-column") {
      static const std::vector<std::string> kColumns = {"Name", "Country", "Order"};
      if (!contains(kColumns, cmd.payload)) {
        incompatible("'" + cmd.payload + "' is not a filter column");
      }
      next.set("column", cmd.payload);
      out.entries.push_back(log_entry("select/select", "Filter column=" + cmd.payload,
                                      target.element_id));
    } else {
      next.set("value", cmd.payload);
      out.entries.push_back(log_entry("type/text", "Filter value=" + cmd.payload,
                                      target.element_id));
    }
    auto before = describe(url);
    auto after = describe(next);
    if (before != after) out.entries.push_back(log_entry("filter/filterdatagrid", after));
    out.url = next;
    return out;
  }

 private:
  static std::string describe(const Url& url) {
    auto value = url.get_or("value", "");
    if (value.empty()) return "cleared";
    return url.get_or("column", "Name") + " contains " + value;
  }
};

class SortGridPage : public Page {
 public:
  PageDoc render(const Url& url) const override {
    PageBuilder b(url.str(), "Orders");
    b.heading("Orders");
    auto column = url.get_or("sort", "");
    auto dir = url.get_or("dir", "");
    for (const auto& [key, label] : kColumns) {
      std::string state = "none";
      if (column == key) state = dir == "desc" ? "descending" : "ascending";
      b.element(make_element("srt-" + std::string(key), "click/button",
                             "Sort by " + std::string(label), state));
    }
    std::vector<const OrderRow*> rows;
    for (const auto& r : kOrders) rows.push_back(&r);
    if (!column.empty()) {
      std::string label = column == "total" ? "Total" : column == "name" ? "Name" : "Order";
      std::stable_sort(rows.begin(), rows.end(), [&](auto* a, auto* b) {
        auto va = column_value(*a, label), vb = column_value(*b, label);
        if (label == "Total") {
          return dir == "desc" ? std::stod(va) > std::stod(vb) : std::stod(va) < std::stod(vb);
        }
        return dir == "desc" ? va > vb : va < vb;
      });
    }
    render_rows(b, rows);
    return std::move(b).build();
  }

  Outcome apply(const Url& url, const ActionCommand&,
                const ElementManifest& target) const override {
    auto key = target.element_id.substr(4);
    Url next = url;
    if (url.get("sort") != key) {
      next.set("sort", key).set("dir", "asc");
    } else if (url.get("dir") == "asc") {
      next.set("dir", "desc");
    } else {
      next.erase("sort").erase("dir");
    }
    Outcome out{next, {log_entry("click/button", target.label, target.element_id)}, false};
    out.entries.push_back(log_entry("filter/sortdatagrid", describe(next)));
    return out;
  }

 private:
  static std::string describe(const Url& url) {
    auto column = url.get("sort");
    if (!column) return "unsorted";
    for (const auto& [key, label] : kColumns) {
      if (*column == key) {
        return std::string(label) + (url.get("dir") == "desc" ? " descending" : " ascending");
      }
    }
    return "unsorted";
  }
  static constexpr std::pair<const char*, const char*> kColumns[] = {
      {"order", "Order"}, {"name", "Name"}, {"total", "Total"}};
};

// ---------------------------------------------------------------------------

using Factory = std::function<std::unique_ptr<Page>()>;

const std::map<std::string, Factory, std::less<>>& registry() {
  using K = Field::Kind;
  static const std::map<std::string, Factory, std::less<>> kPages = {
      {"/ind/click?test=accordion",
       [] {
         return std::make_unique<AccordionPage>(
             "Order details",
             std::vector<Labeled>{
                 {"shipping", "acc-shipping", "Shipping details",
                  "Ships in 2 business days via ground freight."},
                 {"returns", "acc-returns", "Returns", "Free returns for 30 days."},
                 {"warranty", "acc-warranty", "Warranty", "One year limited warranty."}});
       }},
      {"/ind/click?test=button",
       [] {
         return std::make_unique<ButtonsPage>(
             "Feedback", "click/button",
             std::vector<Labeled>{{"cancel", "btn-cancel", "Cancel", "Cancelled."},
                                  {"submit", "btn-submit", "Submit", "Submitted."}});
       }},
      {"/ind/click?test=dialogbutton", [] { return std::make_unique<ConfirmDialogPage>(); }},
      {"/ind/click?test=dropdownmenu", [] { return std::make_unique<DropdownPage>(); }},
      {"/ind/click?test=iconbutton",
       [] {
         return std::make_unique<ButtonsPage>(
             "Photo", "click/iconbutton",
             std::vector<Labeled>{{"settings", "ib-settings", "Settings", "Settings opened."},
                                  {"share", "ib-share", "Share", "Link copied."},
                                  {"favorite", "ib-favorite", "Favorite",
                                   "Added to favorites."}});
       }},
      {"/ind/click?test=link", [] { return std::make_unique<LinksPage>(); }},
      {"/ind/click?test=slider-volume",
       [] { return std::make_unique<SliderPage>("Sound", "volume", 0, 100, 50); }},
      {"/ind/click?test=slider-brightness",
       [] { return std::make_unique<SliderPage>("Display", "brightness", 0, 100, 40); }},
      {"/ind/click?test=slider-temperature",
       [] { return std::make_unique<SliderPage>("Thermostat", "temperature", 60, 80, 72); }},
      {"/ind/click?test=slider-zoom",
       [] { return std::make_unique<SliderPage>("Map", "zoom", 25, 200, 100); }},
      {"/ind/click?test=snackbar", [] { return std::make_unique<SnackbarPage>(); }},
      {"/ind/click?test=switch",
       [] {
         return std::make_unique<SwitchPage>(
             "Notifications",
             std::vector<SwitchPage::Switch>{{"dnd", "Do not disturb", false}});
       }},
      {"/ind/click?test=switch-off",
       [] {
         return std::make_unique<SwitchPage>(
             "Connections",
             std::vector<SwitchPage::Switch>{{"airplane", "Airplane mode", false}});
       }},
      {"/ind/type?test=date",
       [] {
         return std::make_unique<FormPage>(
             "Profile", "", Form({{"birthdate", "ty-birthdate", "Birth date", K::kDate, {}, ""}}));
       }},
      {"/ind/type?test=phone",
       [] {
         return std::make_unique<FormPage>(
             "Contact", "", Form({{"phone", "ty-phone", "Phone number", K::kPhone, {}, ""}}));
       }},
      {"/ind/type?test=text",
       [] {
         return std::make_unique<FormPage>(
             "Profile", "", Form({{"name", "ty-name", "Name", K::kText, {}, ""}}));
       }},
      {"/ind/select?test=checkbox",
       [] {
         return std::make_unique<FormPage>(
             "Create account", "",
             Form({{"terms", "cb-terms", "I accept the terms and conditions", K::kCheckbox, {}, ""},
                   {"marketing", "cb-marketing", "Send me marketing emails", K::kCheckbox, {}, ""}}));
       }},
      {"/ind/select?test=datagridrow", [] { return std::make_unique<GridRowPage>(); }},
      {"/ind/select?test=multicheck",
       [] {
         return std::make_unique<FormPage>(
             "Fruit basket", "Which fruits would you like?",
             Form({{"apples", "mc-apples", "Apples", K::kMulticheck, {}, ""},
                   {"bananas", "mc-bananas", "Bananas", K::kMulticheck, {}, ""},
                   {"cherries", "mc-cherries", "Cherries", K::kMulticheck, {}, ""},
                   {"dates", "mc-dates", "Dates", K::kMulticheck, {}, ""}}));
       }},
      {"/ind/select?test=select",
       [] {
         return std::make_unique<FormPage>(
             "Shipping region", "",
             Form({{"country", "sel-country", "Country", K::kSelect,
                    {"United States", "Canada", "Mexico"}, "United States"}}));
       }},
      {"/ind/navigatemenu?test=basicmenu", [] { return std::make_unique<BasicMenuPage>(); }},
      {"/ind/navigatemenu?test=nestedmenu", [] { return std::make_unique<NestedMenuPage>(); }},
      {"/ind/find?test=accordion",
       [] {
         return std::make_unique<AccordionPage>(
             "Frequently asked questions",
             std::vector<Labeled>{
                 {"shipping", "faq-shipping", "Shipping",
                  "Orders ship within 2 business days."},
                 {"returns", "faq-returns", "Returns",
                  "You can return any item within 30 days of delivery."},
                 {"warranty", "faq-warranty", "Warranty",
                  "Every laptop includes a 1-year limited warranty."}},
             answer_form("find/accordion"));
       }},
      {"/ind/find?test=dialogbutton", [] { return std::make_unique<PlanDialogPage>(); }},
      {"/ind/find?test=paragraphs", [] { return std::make_unique<ParagraphsPage>(); }},
      {"/ind/find?test=tooltip", [] { return std::make_unique<TooltipPage>(); }},
      {"/ind/filter?test=filterdatagrid", [] { return std::make_unique<FilterGridPage>(); }},
      {"/ind/filter?test=sortdatagrid", [] { return std::make_unique<SortGridPage>(); }},
      {"/ind/fill?test=basicform",
       [] {
         return std::make_unique<FormPage>(
             "Sign up", "",
             Form({{"name", "fm-name", "Name", K::kText, {}, ""},
                   {"email", "fm-email", "Email", K::kText, {}, ""}},
                  "fm-submit", "Submit", "fill/basicform"));
       }},
      {"/ind/fill?test=complexform",
       [] {
         return std::make_unique<FormPage>(
             "Registration", "",
             Form({{"fullname", "fc-name", "Full name", K::kText, {}, ""},
                   {"phone", "fc-phone", "Phone", K::kPhone, {}, ""},
                   {"birthdate", "fc-birth", "Birth date", K::kDate, {}, ""},
                   {"country", "fc-country", "Country", K::kSelect,
                    {"United States", "Canada", "Mexico"}, "United States"},
                   {"newsletter", "fc-news", "Subscribe to newsletter", K::kCheckbox, {}, ""}},
                  "fc-submit", "Submit", "fill/complexform"));
       }},
  };
  return kPages;
}

class IndividualSite : public Site {
 public:
  IndividualSite(std::string route, std::string test, std::unique_ptr<Page> page)
      : route_(std::move(route)), test_(std::move(test)), page_(std::move(page)) {}

  const Page* route(const Url& url) const override {
    if (url.path() != route_ || url.get("test") != test_) return nullptr;
    return page_.get();
  }

 private:
  std::string route_;
  std::string test_;
  std::unique_ptr<Page> page_;
};

}  // namespace

std::unique_ptr<Site> make_individual_site(std::string_view start_path) {
  auto it = registry().find(start_path);
  if (it == registry().end()) return nullptr;
  auto url = Url::parse(start_path);
  return std::make_unique<IndividualSite>(url->path(), url->get_or("test", ""),
                                          it->second());
}

}  // namespace websuite::pages
