// websuite command line: serve the environment, run agents, report results.

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <nlohmann/json.hpp>

#include "websuite/attribution.hpp"
#include "websuite/environment.hpp"
#include "websuite/errors.hpp"
#include "websuite/refagents.hpp"
#include "websuite/reporting.hpp"
#include "websuite/runner.hpp"
#include "websuite/service.hpp"
#include "websuite/tasks.hpp"
#include "websuite/taxonomy.hpp"

namespace {

using namespace websuite;

Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

std::unique_ptr<AgentFactory> resolve_agent(const std::string& name, int step_timeout_ms) {
  if (name.rfind("http://", 0) == 0) {
    return make_remote_agent(name, std::chrono::milliseconds(step_timeout_ms));
  }
  if (auto agent = builtin_agent(builtin_suite(), name)) return agent;
  std::string known;
  for (const auto& n : builtin_agent_names()) known += " " + n;
  throw CLI::ValidationError("--agent", "unknown agent '" + name + "' (builtin:" + known +
                                            ", or an http:// endpoint)");
}

void write_output(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + out);
  file << text;
}

int serve(const std::string& host, int port, const std::string& log_dir,
          const std::string& ui_dir) {
  LogStore store(log_dir);
  Environment env(builtin_suite(), store);
  Service service(env, {host, port, ui_dir});
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "websuite serving on http://" << host << ":" << port << " (logs in " << log_dir
            << ")\n";
  service.run();
  g_service = nullptr;
  return 0;
}

int run(const std::string& suite_name, const std::string& agent_name, int trials,
        std::uint64_t seed, const std::string& out, int parallel,
        std::optional<int> port, int step_timeout_ms) {
  const auto& suite = builtin_suite();
  auto agent = resolve_agent(agent_name, step_timeout_ms);
  LogStore store(out);
  Environment env(suite, store);
  std::unique_ptr<Service> service;
  if (port) {
    service = std::make_unique<Service>(env, ServiceOptions{"127.0.0.1", *port, {}});
    std::cerr << "observing sessions on http://127.0.0.1:" << service->start() << "\n";
  }

  RunConfig config;
  config.task_ids = select_tasks(suite, suite_name);
  config.trials = trials;
  config.seed = seed;
  config.parallel = parallel;
  Runner runner(env);
  auto archive = runner.run_suite(*agent, config);

  std::map<std::string, std::pair<int, int>> tally;
  for (const auto& r : archive.records) {
    auto& [ok, n] = tally[r.task_id];
    ok += r.outcome == TrialOutcome::kSuccess ? 1 : 0;
    ++n;
  }
  int total_ok = 0, total = 0;
  for (const auto& id : archive.task_ids) {
    auto [ok, n] = tally[id];
    std::cout << id << "  " << ok << "/" << n << "\n";
    total_ok += ok;
    total += n;
  }
  std::cout << "total  " << total_ok << "/" << total << "  -> " << out << "\n";
  return 0;
}

int report(const std::vector<std::string>& runs, const std::string& compare,
           const std::string& format_name, bool ci, const std::string& out) {
  auto format = report_format_from_name(format_name);
  if (!format) throw CLI::ValidationError("--format", "expected md, csv or doc");
  const auto& suite = builtin_suite();
  std::vector<AttributionReport> reports;
  for (const auto& dir : runs) reports.push_back(attribute_run(suite, dir));
  if (!compare.empty()) {
    auto other = attribute_run(suite, compare);
    const auto& base = reports.front();
    write_output(render_diff(diff_runs(base, other), base, other, *format), out);
    return 0;
  }
  write_output(render_reports(reports, *format, {ci}), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diagnostic benchmark harness for web agents"};
  app.require_subcommand(1);

  auto* serve_cmd = app.add_subcommand("serve", "Serve the task environment over HTTP");
  std::string host = "127.0.0.1";
  int serve_port = 8080;
  std::string log_dir = "websuite-logs";
  std::string ui_dir;
  serve_cmd->add_option("--host", host, "Address to bind");
  serve_cmd->add_option("--port", serve_port, "Port to listen on")->envname("WEBSUITE_PORT");
  serve_cmd->add_option("--log-dir", log_dir, "Directory for session logs");
  serve_cmd->add_option("--ui-dir", ui_dir, "Static frontend files served under /ui/")
      ->check(CLI::ExistingDirectory);

  auto* run_cmd = app.add_subcommand("run", "Run an agent over the task suite");
  std::string suite_name = "all";
  std::string agent_name;
  int trials = 8;
  std::uint64_t seed = 0;
  std::string out_dir;
  int parallel = 1;
  std::optional<int> run_port;
  int step_timeout_ms = 30000;
  run_cmd->add_option("--suite", suite_name, "individual, e2e, all or a single task id");
  run_cmd->add_option("--agent", agent_name, "Builtin agent name or http:// endpoint")->required();
  run_cmd->add_option("--trials", trials, "Trials per task")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "Run seed");
  run_cmd->add_option("--out", out_dir, "Run directory (archive and logs)")->required();
  run_cmd->add_option("--parallel", parallel, "Concurrent trials")->check(CLI::PositiveNumber);
  run_cmd->add_option("--port", run_port, "Also serve the environment for observation")
      ->envname("WEBSUITE_PORT");
  run_cmd->add_option("--step-timeout-ms", step_timeout_ms, "Per-step timeout for remote agents")
      ->check(CLI::PositiveNumber);

  auto* list_cmd = app.add_subcommand("list", "Print the task suite manifest");
  auto* taxonomy_cmd = app.add_subcommand("taxonomy", "Print the interaction taxonomy");

  auto* report_cmd = app.add_subcommand("report", "Attribute and tabulate finished runs");
  std::vector<std::string> runs;
  std::string compare;
  std::string format = "md";
  bool ci = false;
  std::string out_file;
  report_cmd->add_option("--run", runs, "Run directory (repeat for side-by-side columns)")
      ->required()
      ->check(CLI::ExistingDirectory);
  report_cmd->add_option("--compare", compare, "Second run: print per-interaction changes")
      ->check(CLI::ExistingDirectory);
  report_cmd->add_option("--format", format, "md, csv or doc");
  report_cmd->add_flag("--ci", ci, "Include Wald 95% interval half-widths");
  report_cmd->add_option("--out", out_file, "Write to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return serve(host, serve_port, log_dir, ui_dir);
    if (*run_cmd) {
      return run(suite_name, agent_name, trials, seed, out_dir, parallel, run_port,
                 step_timeout_ms);
    }
    if (*list_cmd) {
      std::cout << suite_manifest(builtin_suite()).dump(2) << "\n";
      return 0;
    }
    if (*taxonomy_cmd) {
      std::cout << taxonomy_document(Taxonomy::instance()).dump(2) << "\n";
      return 0;
    }
    if (*report_cmd) return report(runs, compare, format, ci, out_file);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "websuite: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
