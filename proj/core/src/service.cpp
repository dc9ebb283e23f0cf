#include "websuite/service.hpp"

#include <httplib.h>

#include <thread>

#include <nlohmann/json.hpp>

#include "websuite/errors.hpp"

namespace websuite {

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSession:
    case ErrorCode::kUnknownTask:
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kBusy:
      return 409;
    default:
      return 400;
  }
}

void reply(httplib::Response& res, const nlohmann::json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  reply(res, {{"error", error_code_name(code)}, {"message", message}}, http_status(code));
}

nlohmann::json parse_body(const httplib::Request& req) {
  auto doc = nlohmann::json::parse(req.body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kMalformedLine, "request body must be a JSON object");
  }
  return doc;
}

std::string required(const nlohmann::json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    throw Error(ErrorCode::kMalformedLine, std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

std::string query(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) {
    throw Error(ErrorCode::kMalformedLine, std::string("missing query parameter '") + key + "'");
  }
  return req.get_param_value(key);
}

}  // namespace

struct Service::Impl {
  Environment& env;
  ServiceOptions options;
  httplib::Server server;
  std::thread thread;
  int port = 0;

  Impl(Environment& e, ServiceOptions o) : env(e), options(std::move(o)) { routes(); }

  template <typename Handler>
  auto guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const Error& e) {
        reply_error(res, e.code(), e.what());
      } catch (const std::exception& e) {
        reply(res, {{"error", "Internal"}, {"message", e.what()}}, 500);
      }
    };
  }

  nlohmann::json result(const std::string& session) const {
    auto task_id = env.task_id(session);
    auto stream = env.stream(session);
    bool success = false;
    if (const auto* task = env.suite().find_individual(task_id)) {
      success = check_individual(*task, debounce_type_entries(stream), env.final_state(session));
    } else if (const auto* task = env.suite().find_e2e(task_id)) {
      success = verify_e2e(*task, stream);
    }
    return {{"session", session},
            {"task_id", task_id},
            {"path", env.current_path(session)},
            {"done", env.done(session)},
            {"success", success},
            {"log", stream.lines()}};
  }

  void routes() {
    server.Post("/api/session", guarded([this](const auto& req, auto& res) {
      auto body = parse_body(req);
      auto info = env.create_session(required(body, "task_id"));
      reply(res, {{"session_id", info.session_id}, {"start_path", info.start_path}});
    }));
    server.Get("/api/page", guarded([this](const auto& req, auto& res) {
      auto session = query(req, "session");
      auto page = req.has_param("path") ? env.render_page(session, req.get_param_value("path"))
                                        : env.current_page(session);
      reply(res, to_json(page));
    }));
    server.Post("/api/action", guarded([this](const auto& req, auto& res) {
      auto body = parse_body(req);
      auto session = required(body, "session");
      ActionCommand cmd;
      try {
        cmd = command_from_json(body);
      } catch (const Error& e) {
        throw Error(ErrorCode::kIncompatibleVerb, e.what());
      }
      auto result = env.apply_action(session, cmd);
      std::vector<std::string> lines;
      for (const auto& e : result.emitted) lines.push_back(format_line(e));
      reply(res, {{"new_path", result.new_path}, {"emitted", lines}, {"done", result.done}});
    }));
    server.Get("/api/result", guarded([this](const auto& req, auto& res) {
      reply(res, result(query(req, "session")));
    }));
    server.Post("/api/log", guarded([this](const auto& req, auto& res) {
      auto body = parse_body(req);
      auto client_ms = body.value("client_ms", std::int64_t{0});
      auto seq = env.ingest_log(required(body, "session_id"), required(body, "ref_path"),
                                required(body, "payload"), client_ms);
      reply(res, {{"seq", seq}});
    }));
    server.Get("/api/tasks", guarded([this](const auto&, auto& res) {
      reply(res, suite_manifest(env.suite()));
    }));
    server.Get("/api/taxonomy", guarded([](const auto&, auto& res) {
      reply(res, taxonomy_document(Taxonomy::instance()));
    }));
    if (!options.ui_dir.empty()) {
      if (!server.set_mount_point("/ui", options.ui_dir.string())) {
        throw std::runtime_error("cannot serve UI directory " + options.ui_dir.string());
      }
    }
  }

  void bind() {
    if (options.port == 0) {
      port = server.bind_to_any_port(options.host);
    } else {
      port = server.bind_to_port(options.host, options.port) ? options.port : -1;
    }
    if (port < 0) {
      throw std::runtime_error("cannot bind " + options.host + ":" + std::to_string(options.port));
    }
  }
};

Service::Service(Environment& env, ServiceOptions options)
    : impl_(std::make_unique<Impl>(env, std::move(options))) {}

Service::~Service() { stop(); }

int Service::start() {
  impl_->bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void Service::run() {
  impl_->bind();
  impl_->server.listen_after_bind();
}

void Service::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int Service::port() const { return impl_->port; }

}  // namespace websuite
