#include "websuite/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "websuite/errors.hpp"

namespace websuite {

namespace {

constexpr std::string_view kDocFormat = "websuite-report/1";

[[noreturn]] void malformed(const std::string& why) {
  throw Error(ErrorCode::kMalformedReport, why);
}

std::string cell(const RateRow* row, bool with_count, bool with_ci) {
  if (row == nullptr || !row->rate) return "";
  auto s = format_percent(*row->rate);
  if (with_ci && row->ci) s += " (±" + std::to_string(*row->ci) + ")";
  if (with_count) s += " (" + std::to_string(row->count) + ")";
  return s;
}

std::string rate_cell(std::optional<double> rate, int count) {
  if (!rate) return "";
  return format_percent(*rate) + " (" + std::to_string(count) + ")";
}

void table_header(std::ostringstream& out, const std::vector<std::string>& heads,
                  std::size_t left_aligned) {
  out << '|';
  for (const auto& h : heads) out << ' ' << h << " |";
  out << "\n|";
  for (std::size_t i = 0; i < heads.size(); ++i) out << (i < left_aligned ? "---|" : "---:|");
  out << '\n';
}

void table_row(std::ostringstream& out, const std::vector<std::string>& cells) {
  out << '|';
  for (const auto& c : cells) out << ' ' << c << " |";
  out << '\n';
}

struct Layout {
  struct ActionGroup {
    std::string action;
    std::string display;
    std::vector<std::pair<std::string, std::string>> interactions;  // key, display
  };
  struct CategoryGroup {
    std::string category;
    std::vector<ActionGroup> actions;
  };
  std::vector<CategoryGroup> categories;
};

/// Union of the rows present in any report, in registry order.
Layout layout_for(const std::vector<const LevelTable*>& tables) {
  auto present = [&](std::string_view key) {
    return std::any_of(tables.begin(), tables.end(),
                       [&](const LevelTable* t) { return t->find(key) != nullptr; });
  };
  const auto& tax = Taxonomy::instance();
  Layout layout;
  for (auto category : {Category::kOperational, Category::kNavigational, Category::kInformational}) {
    Layout::CategoryGroup cg{std::string(category_name(category)), {}};
    for (const auto& action : tax.actions()) {
      if (action.category != category) continue;
      Layout::ActionGroup ag{action.name, action.display, {}};
      for (const auto& node : tax.children(action.name)) {
        auto key = format_ref(node);
        if (present(key)) ag.interactions.emplace_back(key, tax.display_name(node));
      }
      if (!ag.interactions.empty()) cg.actions.push_back(std::move(ag));
    }
    if (!cg.actions.empty()) layout.categories.push_back(std::move(cg));
  }
  return layout;
}

int first_count(const std::vector<const LevelTable*>& tables, std::string_view key) {
  for (const auto* t : tables) {
    if (const auto* row = t->find(key)) return row->count;
  }
  return 0;
}

std::string render_markdown(const std::vector<AttributionReport>& reports,
                            const RenderOptions& options) {
  std::ostringstream out;
  std::vector<std::string> agents;
  std::vector<const LevelTable*> individual, e2e;
  for (const auto& r : reports) {
    agents.push_back(r.agent);
    if (!r.individual_tasks.empty()) individual.push_back(&r.individual);
    if (!r.e2e_tasks.empty()) e2e.push_back(&r.e2e);
  }
  auto column = [&](const AttributionReport& r, bool indiv) {
    return indiv ? &r.individual : &r.e2e;
  };

  if (!individual.empty()) {
    auto layout = layout_for(individual);
    out << "## Individual tasks by action\n\n";
    std::vector<std::string> heads = {"Action", "Trials"};
    heads.insert(heads.end(), agents.begin(), agents.end());
    table_header(out, heads, 1);
    for (const auto& cg : layout.categories) {
      std::vector<std::string> cells = {"**" + cg.category + " (combined)**",
                                        std::to_string(first_count(individual, cg.category))};
      for (const auto& r : reports) cells.push_back(cell(column(r, true)->find(cg.category), false, false));
      table_row(out, cells);
      for (const auto& ag : cg.actions) {
        cells = {ag.display, std::to_string(first_count(individual, ag.action))};
        for (const auto& r : reports) cells.push_back(cell(column(r, true)->find(ag.action), false, false));
        table_row(out, cells);
      }
    }

    out << "\n## Individual tasks by interaction\n\n";
    heads = {"Action", "Interaction", "Trials"};
    heads.insert(heads.end(), agents.begin(), agents.end());
    table_header(out, heads, 2);
    for (const auto& cg : layout.categories) {
      for (const auto& ag : cg.actions) {
        for (const auto& [key, display] : ag.interactions) {
          std::vector<std::string> cells = {ag.display, display,
                                            std::to_string(first_count(individual, key))};
          for (const auto& r : reports) cells.push_back(cell(column(r, true)->find(key), false, options.ci));
          table_row(out, cells);
        }
      }
    }
  }

  if (!e2e.empty()) {
    out << (individual.empty() ? "" : "\n") << "## E2E checkpoints\n";
    std::vector<std::string> task_ids;
    for (const auto& r : reports) {
      for (const auto& t : r.e2e_tasks) {
        if (std::find(task_ids.begin(), task_ids.end(), t.task_id) == task_ids.end()) {
          task_ids.push_back(t.task_id);
        }
      }
    }
    for (const auto& task_id : task_ids) {
      const E2ETaskStat* shape = nullptr;
      for (const auto& r : reports) {
        for (const auto& t : r.e2e_tasks) {
          if (t.task_id == task_id && !shape) shape = &t;
        }
      }
      out << "\n### " << task_id << "\n\n";
      std::vector<std::string> heads = {"Agent", "E2E"};
      for (const auto& c : shape->checkpoints) heads.push_back(c.label);
      table_header(out, heads, 1);
      for (const auto& r : reports) {
        const E2ETaskStat* stat = nullptr;
        for (const auto& t : r.e2e_tasks) {
          if (t.task_id == task_id) stat = &t;
        }
        std::vector<std::string> cells = {r.agent};
        if (stat == nullptr) {
          cells.resize(heads.size());
        } else {
          cells.push_back(rate_cell(stat->trials ? std::optional(double(stat->successes) / stat->trials)
                                                 : std::nullopt,
                                    stat->trials));
          for (const auto& c : stat->checkpoints) cells.push_back(rate_cell(c.rate(), c.reached));
        }
        table_row(out, cells);
      }
    }

    out << "\n## E2E interactions\n\n";
    auto layout = layout_for(e2e);
    std::vector<std::string> heads = {"Interaction"};
    heads.insert(heads.end(), agents.begin(), agents.end());
    table_header(out, heads, 1);
    for (const auto& cg : layout.categories) {
      std::vector<std::string> cells = {"**" + cg.category + " (combined)**"};
      for (const auto& r : reports) cells.push_back(cell(column(r, false)->find(cg.category), true, false));
      table_row(out, cells);
      for (const auto& ag : cg.actions) {
        cells = {"*" + ag.display + " (combined)*"};
        for (const auto& r : reports) cells.push_back(cell(column(r, false)->find(ag.action), true, false));
        table_row(out, cells);
        for (const auto& [key, display] : ag.interactions) {
          cells = {display};
          for (const auto& r : reports) cells.push_back(cell(column(r, false)->find(key), true, options.ci));
          table_row(out, cells);
        }
      }
    }

    bool any_extras = std::any_of(reports.begin(), reports.end(),
                                  [](const AttributionReport& r) { return !r.extras.empty(); });
    if (any_extras) {
      out << "\n## Unmatched E2E logs\n\n";
      table_header(out, {"Agent", "Task", "Log", "Count"}, 3);
      for (const auto& r : reports) {
        for (const auto& e : r.extras) {
          table_row(out, {r.agent, e.task_id, e.ref, std::to_string(e.count)});
        }
      }
    }
  }
  return out.str();
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_rate(std::optional<double> rate) {
  if (!rate) return "";
  auto s = format_percent(*rate);
  s.pop_back();
  return s;
}

std::string render_csv(const std::vector<AttributionReport>& reports) {
  std::ostringstream out;
  out << "section,agent,level,key,display,rate_percent,count,ci\n";
  auto line = [&](std::string_view section, const std::string& agent, std::string_view level,
                  const std::string& key, const std::string& display,
                  std::optional<double> rate, int count, std::optional<int> ci) {
    out << section << ',' << csv_field(agent) << ',' << level << ',' << csv_field(key) << ','
        << csv_field(display) << ',' << csv_rate(rate) << ',' << count << ','
        << (ci ? std::to_string(*ci) : "") << '\n';
  };
  for (const auto& r : reports) {
    for (auto [section, table] : {std::pair{"individual", &r.individual}, std::pair{"e2e", &r.e2e}}) {
      for (auto [level, rows] : {std::pair{"category", &table->categories},
                                 std::pair{"action", &table->actions},
                                 std::pair{"interaction", &table->interactions}}) {
        for (const auto& row : *rows) {
          line(section, r.agent, level, row.key, row.display, row.rate, row.count, row.ci);
        }
      }
    }
    for (const auto& t : r.e2e_tasks) {
      line("e2e", r.agent, "task", t.task_id, t.task_id,
           t.trials ? std::optional(double(t.successes) / t.trials) : std::nullopt, t.trials,
           wald_ci(t.successes, t.trials));
      for (const auto& c : t.checkpoints) {
        line("e2e", r.agent, "checkpoint", t.task_id + "#" + c.id, c.label, c.rate(), c.reached,
             wald_ci(c.completed, c.reached));
      }
    }
  }
  return out.str();
}

// --- structured document ---------------------------------------------------------

nlohmann::json rows_json(const std::vector<RateRow>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"key", r.key},
                   {"display", r.display},
                   {"rate", r.rate ? nlohmann::json(*r.rate) : nlohmann::json()},
                   {"count", r.count},
                   {"ci", r.ci ? nlohmann::json(*r.ci) : nlohmann::json()}});
  }
  return out;
}

nlohmann::json levels_json(const LevelTable& t) {
  return {{"interactions", rows_json(t.interactions)},
          {"actions", rows_json(t.actions)},
          {"categories", rows_json(t.categories)}};
}

std::vector<RateRow> rows_from(const nlohmann::json& j) {
  std::vector<RateRow> rows;
  for (const auto& r : j) {
    RateRow row;
    row.key = r.at("key").get<std::string>();
    row.display = r.at("display").get<std::string>();
    if (!r.at("rate").is_null()) row.rate = r.at("rate").get<double>();
    row.count = r.at("count").get<int>();
    if (!r.at("ci").is_null()) row.ci = r.at("ci").get<int>();
    rows.push_back(std::move(row));
  }
  return rows;
}

LevelTable levels_from(const nlohmann::json& j) {
  return {rows_from(j.at("interactions")), rows_from(j.at("actions")),
          rows_from(j.at("categories"))};
}

}  // namespace

std::optional<ReportFormat> report_format_from_name(std::string_view name) {
  if (name == "md" || name == "markdown") return ReportFormat::kMarkdown;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "doc" || name == "json") return ReportFormat::kDocument;
  return std::nullopt;
}

nlohmann::json report_to_document(const AttributionReport& report) {
  auto tasks = nlohmann::json::array();
  for (const auto& t : report.individual_tasks) {
    tasks.push_back({{"task_id", t.task_id},
                     {"interaction", t.interaction},
                     {"successes", t.successes},
                     {"trials", t.trials}});
  }
  auto e2e_tasks = nlohmann::json::array();
  for (const auto& t : report.e2e_tasks) {
    auto checkpoints = nlohmann::json::array();
    for (const auto& c : t.checkpoints) {
      checkpoints.push_back({{"id", c.id},
                             {"label", c.label},
                             {"completed", c.completed},
                             {"reached", c.reached}});
    }
    e2e_tasks.push_back({{"task_id", t.task_id},
                         {"successes", t.successes},
                         {"trials", t.trials},
                         {"checkpoints", checkpoints}});
  }
  auto leaves = nlohmann::json::array();
  for (const auto& l : report.e2e_leaves) {
    leaves.push_back({{"ref", format_ref(l.ref)},
                      {"successes", l.successes},
                      {"instances", l.instances}});
  }
  auto extras = nlohmann::json::array();
  for (const auto& e : report.extras) {
    extras.push_back({{"task_id", e.task_id}, {"ref", e.ref}, {"count", e.count}});
  }
  return {{"run_id", report.run_id},
          {"agent", report.agent},
          {"individual", {{"tasks", tasks}, {"levels", levels_json(report.individual)}}},
          {"e2e",
           {{"tasks", e2e_tasks},
            {"leaves", leaves},
            {"levels", levels_json(report.e2e)},
            {"extras", extras}}}};
}

AttributionReport report_from_document(const nlohmann::json& doc) {
  try {
    std::vector<TaskStat> tasks;
    for (const auto& t : doc.at("individual").at("tasks")) {
      TaskStat s{t.at("task_id").get<std::string>(), t.at("interaction").get<std::string>(),
                 t.at("successes").get<int>(), t.at("trials").get<int>()};
      parse_ref(s.interaction);
      if (s.successes < 0 || s.successes > s.trials) malformed("bad counts for " + s.task_id);
      tasks.push_back(std::move(s));
    }
    std::vector<E2ETaskStat> e2e_tasks;
    for (const auto& t : doc.at("e2e").at("tasks")) {
      E2ETaskStat s{t.at("task_id").get<std::string>(), t.at("successes").get<int>(),
                    t.at("trials").get<int>(), {}};
      for (const auto& c : t.at("checkpoints")) {
        s.checkpoints.push_back({c.at("id").get<std::string>(), c.at("label").get<std::string>(),
                                 c.at("completed").get<int>(), c.at("reached").get<int>()});
      }
      e2e_tasks.push_back(std::move(s));
    }
    std::vector<InteractionStat> leaves;
    for (const auto& l : doc.at("e2e").at("leaves")) {
      InteractionStat s{parse_ref(l.at("ref").get<std::string>()), l.at("successes").get<int>(),
                        l.at("instances").get<int>()};
      if (s.successes < 0 || s.successes > s.instances) malformed("bad counts for a leaf");
      leaves.push_back(std::move(s));
    }
    std::vector<ExtraStat> extras;
    for (const auto& e : doc.at("e2e").at("extras")) {
      extras.push_back({e.at("task_id").get<std::string>(), e.at("ref").get<std::string>(),
                        e.at("count").get<int>()});
    }
    auto report = make_report(doc.at("run_id").get<std::string>(),
                              doc.at("agent").get<std::string>(), std::move(tasks),
                              std::move(e2e_tasks), std::move(leaves), std::move(extras));
    if (levels_from(doc.at("individual").at("levels")) != report.individual ||
        levels_from(doc.at("e2e").at("levels")) != report.e2e) {
      malformed("stored aggregates disagree with the leaf data");
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    malformed(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedReport) throw;
    malformed(e.what());
  }
}

std::vector<AttributionReport> reports_from_text(std::string_view text) {
  auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) malformed("not valid JSON");
  if (!doc.is_object() || doc.value("format", std::string{}) != kDocFormat) {
    malformed("unsupported report format");
  }
  std::vector<AttributionReport> out;
  try {
    for (const auto& r : doc.at("reports")) out.push_back(report_from_document(r));
  } catch (const nlohmann::json::exception& e) {
    malformed(e.what());
  }
  return out;
}

std::string render_reports(const std::vector<AttributionReport>& reports, ReportFormat format,
                           RenderOptions options) {
  switch (format) {
    case ReportFormat::kMarkdown:
      return render_markdown(reports, options);
    case ReportFormat::kCsv:
      return render_csv(reports);
    case ReportFormat::kDocument: {
      auto list = nlohmann::json::array();
      for (const auto& r : reports) list.push_back(report_to_document(r));
      nlohmann::json doc = {{"format", kDocFormat}, {"reports", list}};
      return doc.dump(2) + "\n";
    }
  }
  return {};
}

// --- diff ------------------------------------------------------------------------------

std::optional<double> DiffRow::delta() const {
  if (!a || !b) return std::nullopt;
  return (*b - *a) * 100.0;
}

std::vector<DiffRow> diff_runs(const AttributionReport& a, const AttributionReport& b) {
  auto task_set = [](const AttributionReport& r) {
    std::set<std::string> ids;
    for (const auto& t : r.individual_tasks) ids.insert(t.task_id);
    for (const auto& t : r.e2e_tasks) ids.insert(t.task_id);
    return ids;
  };
  if (task_set(a) != task_set(b)) {
    throw Error(ErrorCode::kSuiteMismatch, "runs " + a.run_id + " and " + b.run_id +
                                               " cover different tasks");
  }
  std::vector<DiffRow> rows;
  for (auto [section, ta, tb] : {std::tuple{"individual", &a.individual, &b.individual},
                                 std::tuple{"e2e", &a.e2e, &b.e2e}}) {
    std::vector<std::string> keys;
    for (const auto* t : {ta, tb}) {
      for (const auto& r : t->interactions) {
        if (std::find(keys.begin(), keys.end(), r.key) == keys.end()) keys.push_back(r.key);
      }
    }
    for (const auto& key : keys) {
      const auto* ra = ta->find(key);
      const auto* rb = tb->find(key);
      DiffRow row{section, key, (ra ? ra : rb)->display, ra ? ra->rate : std::nullopt,
                  rb ? rb->rate : std::nullopt};
      rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const DiffRow& x, const DiffRow& y) {
    double dx = x.delta() ? std::abs(*x.delta()) : -1;
    double dy = y.delta() ? std::abs(*y.delta()) : -1;
    if (std::abs(dx - dy) > 1e-9) return dx > dy;
    return std::tie(x.section, x.key) < std::tie(y.section, y.key);
  });
  return rows;
}

namespace {

std::string format_points(double delta) {
  auto s = format_percent(std::abs(delta) / 100.0);
  s.pop_back();
  if (s == "0") return "0";
  return (delta > 0 ? "+" : "-") + s;
}

}  // namespace

std::string render_diff(const std::vector<DiffRow>& rows, const AttributionReport& a,
                        const AttributionReport& b, ReportFormat format) {
  auto rate = [](std::optional<double> r) { return r ? format_percent(*r) : std::string(); };
  if (format == ReportFormat::kDocument) {
    auto list = nlohmann::json::array();
    for (const auto& r : rows) {
      list.push_back({{"section", r.section},
                      {"ref", r.key},
                      {"a", r.a ? nlohmann::json(*r.a) : nlohmann::json()},
                      {"b", r.b ? nlohmann::json(*r.b) : nlohmann::json()},
                      {"delta_points", r.delta() ? nlohmann::json(*r.delta()) : nlohmann::json()}});
    }
    nlohmann::json doc = {{"a", a.run_id}, {"b", b.run_id}, {"rows", list}};
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == ReportFormat::kCsv) {
    out << "section,ref,a_percent,b_percent,delta_points\n";
    for (const auto& r : rows) {
      auto strip = [&](std::optional<double> v) {
        auto s = rate(v);
        if (!s.empty()) s.pop_back();
        return s;
      };
      out << r.section << ',' << r.key << ',' << strip(r.a) << ',' << strip(r.b) << ','
          << (r.delta() ? format_points(*r.delta()) : "") << '\n';
    }
    return out.str();
  }
  out << "## Rate changes: " << a.agent << " -> " << b.agent << "\n\n";
  table_header(out, {"Section", "Interaction", a.agent, b.agent, "Change"}, 2);
  for (const auto& r : rows) {
    table_row(out, {r.section, r.display + " (`" + r.key + "`)", rate(r.a), rate(r.b),
                    r.delta() ? format_points(*r.delta()) : ""});
  }
  return out.str();
}

}  // namespace websuite
