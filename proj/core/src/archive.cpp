#include <fstream>

#include <nlohmann/json.hpp>

#include "websuite/errors.hpp"
#include "websuite/runner.hpp"

namespace websuite {

namespace {

constexpr std::string_view kFormat = "websuite-run/1";

[[noreturn]] void malformed(const std::string& why) {
  throw Error(ErrorCode::kMalformedArchive, why);
}

}  // namespace

const TrialRecord* RunArchive::find(std::string_view task_id, int trial_index) const {
  for (const auto& r : records) {
    if (r.task_id == task_id && r.trial_index == trial_index) return &r;
  }
  return nullptr;
}

nlohmann::json to_json(const RunArchive& archive) {
  auto records = nlohmann::json::array();
  for (const auto& r : archive.records) {
    nlohmann::json j = {{"task_id", r.task_id},
                        {"trial", r.trial_index},
                        {"session_id", r.session_id},
                        {"outcome", outcome_name(r.outcome)},
                        {"wall_ms", r.wall_ms},
                        {"steps", r.steps},
                        {"log", r.log_file},
                        {"final_path", r.final_path}};
    if (!r.error.empty()) j["error"] = r.error;
    records.push_back(std::move(j));
  }
  nlohmann::json config = {{"tasks", archive.task_ids}, {"trials", archive.trials}};
  config["step_ms"] = archive.step_ms ? nlohmann::json(*archive.step_ms) : nlohmann::json();
  return {{"format", kFormat},
          {"run_id", archive.run_id},
          {"agent", {{"name", archive.agent.name}, {"version", archive.agent.version}}},
          {"seed", archive.seed},
          {"config", config},
          {"records", records}};
}

RunArchive archive_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kFormat) malformed("unsupported format");
    RunArchive a;
    a.run_id = doc.at("run_id").get<std::string>();
    a.agent.name = doc.at("agent").at("name").get<std::string>();
    a.agent.version = doc.at("agent").at("version").get<std::string>();
    a.seed = doc.at("seed").get<std::uint64_t>();
    const auto& config = doc.at("config");
    a.task_ids = config.at("tasks").get<std::vector<std::string>>();
    a.trials = config.at("trials").get<int>();
    if (!config.at("step_ms").is_null()) a.step_ms = config.at("step_ms").get<std::int64_t>();
    for (const auto& j : doc.at("records")) {
      TrialRecord r;
      r.task_id = j.at("task_id").get<std::string>();
      r.trial_index = j.at("trial").get<int>();
      r.session_id = j.at("session_id").get<std::string>();
      auto outcome = outcome_from_name(j.at("outcome").get<std::string>());
      if (!outcome) malformed("unknown outcome in " + r.task_id);
      r.outcome = *outcome;
      r.wall_ms = j.at("wall_ms").get<std::int64_t>();
      r.steps = j.at("steps").get<int>();
      r.log_file = j.at("log").get<std::string>();
      r.final_path = j.at("final_path").get<std::string>();
      r.error = j.value("error", std::string{});
      if (a.find(r.task_id, r.trial_index)) {
        malformed("duplicate record for " + r.task_id + " trial " +
                  std::to_string(r.trial_index));
      }
      a.records.push_back(std::move(r));
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    malformed(e.what());
  }
}

RunArchive load_archive(const std::filesystem::path& run_dir) {
  std::ifstream in(run_dir / kArchiveFile);
  if (!in) malformed("no " + std::string(kArchiveFile) + " in " + run_dir.string());
  auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) malformed("archive is not valid JSON");
  return archive_from_json(doc);
}

void save_archive(const std::filesystem::path& run_dir, const RunArchive& archive) {
  std::filesystem::create_directories(run_dir);
  auto target = run_dir / kArchiveFile;
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << to_json(archive).dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

LogStream load_trial_stream(const std::filesystem::path& run_dir,
                            const TrialRecord& record) {
  return read_log_file(run_dir / record.log_file);
}

}  // namespace websuite
