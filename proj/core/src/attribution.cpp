#include "websuite/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "websuite/errors.hpp"

namespace websuite {

// --- statistics ------------------------------------------------------------------

std::optional<int> wald_ci_rate(double rate, int n, double z) {
  if (n <= 0) return std::nullopt;
  double half = 100.0 * z * std::sqrt(rate * (1.0 - rate) / n);
  return static_cast<int>(std::floor(half + 0.5 + 1e-9));
}

std::optional<int> wald_ci(int successes, int n, double z) {
  if (n <= 0) return std::nullopt;
  return wald_ci_rate(static_cast<double>(successes) / n, n, z);
}

std::string format_percent(double rate) {
  double hundredths = std::floor(std::abs(rate) * 10000.0 + 0.5 + 1e-6);
  if (rate < 0 && hundredths > 0) hundredths = -hundredths;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", hundredths / 100.0);
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s + "%";
}

// --- segmentation --------------------------------------------------------------

namespace {

std::optional<std::size_t> checkpoint_for(const E2ETask& task, std::string_view path) {
  for (std::size_t i = 0; i < task.checkpoints.size(); ++i) {
    if (task.checkpoints[i].page.matches(path)) return i;
  }
  return std::nullopt;
}

/// Maximum bipartite matching (Kuhn); returns the entry index per golden.
std::vector<std::optional<std::size_t>> match_goldens(
    const std::vector<GoldenEntry>& goldens, const std::vector<const LogEntry*>& entries) {
  auto fits = [&](std::size_t g, std::size_t e) {
    const auto& golden = goldens[g];
    const auto& entry = *entries[e];
    return std::find(golden.refs.begin(), golden.refs.end(), entry.ref) != golden.refs.end() &&
           golden.payload.matches(entry.payload);
  };
  std::vector<std::optional<std::size_t>> owner(entries.size());  // entry -> golden
  std::function<bool(std::size_t, std::vector<bool>&)> augment =
      [&](std::size_t g, std::vector<bool>& seen) {
        for (std::size_t e = 0; e < entries.size(); ++e) {
          if (seen[e] || !fits(g, e)) continue;
          seen[e] = true;
          if (!owner[e] || augment(*owner[e], seen)) {
            owner[e] = g;
            return true;
          }
        }
        return false;
      };
  for (std::size_t g = 0; g < goldens.size(); ++g) {
    std::vector<bool> seen(entries.size(), false);
    augment(g, seen);
  }
  std::vector<std::optional<std::size_t>> result(goldens.size());
  for (std::size_t e = 0; e < entries.size(); ++e) {
    if (owner[e]) result[*owner[e]] = e;
  }
  return result;
}

}  // namespace

std::vector<Segment> segment_by_checkpoints(const E2ETask& task, const LogStream& stream) {
  std::vector<Segment> segments;
  segments.push_back({checkpoint_for(task, task.start_path), {}, 0});
  for (std::size_t i = 0; i < stream.entries.size(); ++i) {
    const auto& e = stream.entries[i];
    if (e.is_nav()) {
      if (auto k = checkpoint_for(task, e.payload)) {
        segments.push_back({k, {e}, i});
        continue;
      }
    }
    segments.back().entries.push_back(e);
  }
  return segments;
}

TrialScore score_trial(const E2ETask& task, const LogStream& raw) {
  auto stream = debounce_type_entries(raw);
  auto segments = segment_by_checkpoints(task, stream);
  const auto n = task.checkpoints.size();

  // Recover stream indices for segment entries.
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<std::optional<std::size_t>> first_visit(n);
  {
    std::size_t cursor = 0;
    for (const auto& seg : segments) {
      if (seg.checkpoint && !first_visit[*seg.checkpoint]) first_visit[*seg.checkpoint] = seg.start;
      for (std::size_t j = 0; j < seg.entries.size(); ++j, ++cursor) {
        if (stream.entries[cursor].is_nav()) continue;
        // Work before any checkpoint page counts toward the first checkpoint.
        if (seg.checkpoint) {
          members[*seg.checkpoint].push_back(cursor);
        } else if (n > 0) {
          members[0].push_back(cursor);
        }
      }
    }
  }

  TrialScore score;
  score.verified = verify_e2e(task, stream);
  std::vector<bool> accounted(stream.entries.size(), false);
  bool chain = true;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& spec = task.checkpoints[k];
    CheckpointScore cs;
    chain = chain && (k == 0 || first_visit[k].has_value());
    cs.reached = chain;
    std::vector<const LogEntry*> entries;
    for (auto idx : members[k]) entries.push_back(&stream.entries[idx]);
    auto matching = match_goldens(spec.goldens, entries);
    bool all_matched = true;
    for (const auto& m : matching) {
      GoldenResult r;
      if (m) {
        r.matched = true;
        r.entry = members[k][*m];
        accounted[*r.entry] = true;
      }
      all_matched = all_matched && r.matched;
      cs.goldens.push_back(r);
    }
    for (auto idx : members[k]) {
      if (spec.override_ref && stream.entries[idx].ref == *spec.override_ref) {
        accounted[idx] = true;
      }
    }
    bool exited = false;
    if (first_visit[k] || k == 0) {
      std::size_t from = first_visit[k].value_or(0);
      for (std::size_t i = from; i < stream.entries.size() && !exited; ++i) {
        exited = stream.entries[i].is_nav() && spec.exit.matches(stream.entries[i].payload);
      }
    }
    cs.completed = cs.reached && all_matched && exited;
    if (cs.reached) {
      if (spec.override_ref) {
        score.instances.push_back({*spec.override_ref, cs.completed});
      } else {
        for (std::size_t g = 0; g < spec.goldens.size(); ++g) {
          for (const auto& ref : spec.goldens[g].refs) {
            score.instances.push_back({ref, cs.goldens[g].matched});
          }
        }
      }
    }
    score.checkpoints.push_back(std::move(cs));
  }
  for (std::size_t i = 0; i < stream.entries.size(); ++i) {
    if (!stream.entries[i].is_nav() && !accounted[i]) score.extras.push_back(stream.entries[i]);
  }
  return score;
}

// --- aggregation ------------------------------------------------------------------

namespace {

std::size_t registry_index(const InteractionRef& ref) {
  auto nodes = Taxonomy::instance().nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == ref) return i;
  }
  return nodes.size();
}

std::size_t action_index(std::string_view action) {
  auto actions = Taxonomy::instance().actions();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].name == action) return i;
  }
  return actions.size();
}

InteractionRef canonical(const InteractionRef& ref) {
  const auto* node = Taxonomy::instance().find(ref.action, ref.interaction);
  return node ? *node : ref;
}

/// Groups rows of interactions under their actions and categories in
/// registry order.
template <typename Leaf, typename Combine>
LevelTable build_levels(std::vector<Leaf> leaves, Combine combine) {
  std::sort(leaves.begin(), leaves.end(), [](const Leaf& a, const Leaf& b) {
    return registry_index(a.ref) < registry_index(b.ref);
  });
  const auto& tax = Taxonomy::instance();
  LevelTable table;
  std::map<std::size_t, std::vector<const Leaf*>> by_action;
  std::map<Category, std::vector<const Leaf*>> by_category;
  for (const auto& leaf : leaves) {
    auto ref = canonical(leaf.ref);
    by_action[action_index(ref.action)].push_back(&leaf);
    by_category[ref.category].push_back(&leaf);
    auto row = combine(std::vector<const Leaf*>{&leaf}, true);
    row.key = format_ref(ref);
    row.display = tax.display_name(ref);
    table.interactions.push_back(row);
  }
  for (const auto& [index, group] : by_action) {
    const auto& action = tax.actions()[index];
    auto row = combine(group, false);
    row.key = action.name;
    row.display = action.display;
    table.actions.push_back(row);
  }
  for (const auto& [category, group] : by_category) {
    auto row = combine(group, false);
    row.key = std::string(category_name(category));
    row.display = row.key;
    table.categories.push_back(row);
  }
  return table;
}

}  // namespace

const RateRow* LevelTable::find(std::string_view key) const {
  for (const auto* rows : {&interactions, &actions, &categories}) {
    for (const auto& r : *rows) {
      if (r.key == key) return &r;
    }
  }
  return nullptr;
}

LevelTable aggregate_individual(const std::vector<InteractionRate>& rates) {
  return build_levels(rates, [](const std::vector<const InteractionRate*>& group, bool leaf) {
    RateRow row;
    double sum = 0;
    double weighted_trials = 0;
    for (const auto* r : group) {
      sum += r->rate;
      weighted_trials += static_cast<double>(r->trials) / std::max(1, r->tasks);
    }
    row.rate = group.empty() ? std::nullopt : std::optional(sum / group.size());
    if (leaf) {
      row.count = group.front()->trials;
      row.ci = wald_ci_rate(*row.rate, row.count);
    } else {
      row.count = static_cast<int>(std::lround(weighted_trials));
    }
    return row;
  });
}

LevelTable aggregate_e2e(const std::vector<InteractionStat>& stats) {
  return build_levels(stats, [](const std::vector<const InteractionStat*>& group, bool) {
    RateRow row;
    int successes = 0;
    for (const auto* s : group) {
      successes += s->successes;
      row.count += s->instances;
    }
    if (row.count > 0) {
      row.rate = static_cast<double>(successes) / row.count;
      row.ci = wald_ci(successes, row.count);
    }
    return row;
  });
}

std::optional<double> CheckpointStat::rate() const {
  if (reached == 0) return std::nullopt;
  return static_cast<double>(completed) / reached;
}

std::vector<InteractionRate> interaction_rates(const std::vector<TaskStat>& tasks) {
  std::map<std::string, std::vector<const TaskStat*>> grouped;
  for (const auto& t : tasks) grouped[t.interaction].push_back(&t);
  std::vector<InteractionRate> out;
  for (const auto& [ref, group] : grouped) {
    InteractionRate r;
    r.ref = parse_ref(ref);
    r.tasks = 0;
    double sum = 0;
    for (const auto* t : group) {
      if (t->trials == 0) continue;
      sum += static_cast<double>(t->successes) / t->trials;
      r.trials += t->trials;
      ++r.tasks;
    }
    if (r.tasks == 0) continue;
    r.rate = sum / r.tasks;
    out.push_back(r);
  }
  return out;
}

AttributionReport make_report(std::string run_id, std::string agent,
                              std::vector<TaskStat> individual_tasks,
                              std::vector<E2ETaskStat> e2e_tasks,
                              std::vector<InteractionStat> e2e_leaves,
                              std::vector<ExtraStat> extras) {
  AttributionReport report;
  report.run_id = std::move(run_id);
  report.agent = std::move(agent);
  report.individual = aggregate_individual(interaction_rates(individual_tasks));
  report.individual_tasks = std::move(individual_tasks);
  std::sort(e2e_leaves.begin(), e2e_leaves.end(),
            [](const InteractionStat& a, const InteractionStat& b) {
              return registry_index(a.ref) < registry_index(b.ref);
            });
  for (auto& leaf : e2e_leaves) leaf.ref = canonical(leaf.ref);
  report.e2e = aggregate_e2e(e2e_leaves);
  report.e2e_leaves = std::move(e2e_leaves);
  report.e2e_tasks = std::move(e2e_tasks);
  report.extras = std::move(extras);
  return report;
}

AttributionReport attribute(const Suite& suite, const RunArchive& archive,
                            const std::filesystem::path& run_dir) {
  std::vector<TaskStat> individual;
  std::vector<E2ETaskStat> e2e_tasks;
  std::map<std::size_t, InteractionStat> leaves;  // by registry index
  std::map<std::pair<std::string, std::string>, int> extras;

  for (const auto& task_id : archive.task_ids) {
    if (const auto* task = suite.find_individual(task_id)) {
      TaskStat stat{task_id, format_ref(task->target), 0, 0};
      for (const auto& r : archive.records) {
        if (r.task_id != task_id) continue;
        ++stat.trials;
        stat.successes += r.outcome == TrialOutcome::kSuccess ? 1 : 0;
      }
      individual.push_back(stat);
      continue;
    }
    const auto* task = suite.find_e2e(task_id);
    if (task == nullptr) {
      throw Error(ErrorCode::kSuiteMismatch, "archive task " + task_id + " is not in the suite");
    }
    E2ETaskStat stat;
    stat.task_id = task_id;
    for (const auto& c : task->checkpoints) {
      stat.checkpoints.push_back({c.id, c.label, 0, 0});
      auto refs = c.override_ref ? std::vector{*c.override_ref} : std::vector<InteractionRef>{};
      if (!c.override_ref) {
        for (const auto& g : c.goldens) refs.insert(refs.end(), g.refs.begin(), g.refs.end());
      }
      for (const auto& ref : refs) {
        auto canon = canonical(ref);
        leaves.try_emplace(registry_index(canon), InteractionStat{canon, 0, 0});
      }
    }
    for (const auto& r : archive.records) {
      if (r.task_id != task_id) continue;
      auto score = score_trial(*task, load_trial_stream(run_dir, r));
      ++stat.trials;
      stat.successes += score.verified ? 1 : 0;
      for (std::size_t k = 0; k < score.checkpoints.size(); ++k) {
        stat.checkpoints[k].reached += score.checkpoints[k].reached ? 1 : 0;
        stat.checkpoints[k].completed += score.checkpoints[k].completed ? 1 : 0;
      }
      for (const auto& inst : score.instances) {
        auto& leaf = leaves.at(registry_index(canonical(inst.ref)));
        ++leaf.instances;
        leaf.successes += inst.success ? 1 : 0;
      }
      for (const auto& e : score.extras) ++extras[{task_id, format_ref(e.ref)}];
    }
    e2e_tasks.push_back(std::move(stat));
  }

  std::vector<InteractionStat> leaf_list;
  for (auto& [index, leaf] : leaves) leaf_list.push_back(leaf);
  std::vector<ExtraStat> extra_list;
  for (const auto& [key, count] : extras) extra_list.push_back({key.first, key.second, count});
  return make_report(archive.run_id, archive.agent.name, std::move(individual),
                     std::move(e2e_tasks), std::move(leaf_list), std::move(extra_list));
}

AttributionReport attribute_run(const Suite& suite, const std::filesystem::path& run_dir) {
  return attribute(suite, load_archive(run_dir), run_dir);
}

}  // namespace websuite
