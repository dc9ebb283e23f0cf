#include <httplib.h>

#include <nlohmann/json.hpp>

#include "websuite/agent.hpp"
#include "websuite/errors.hpp"

namespace websuite {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0) {
    throw Error(ErrorCode::kAgentError, "agent endpoint must be an http:// URL: " + url);
  }
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

class RemoteAgent : public Agent {
 public:
  RemoteAgent(Endpoint endpoint, std::chrono::milliseconds timeout)
      : endpoint_(std::move(endpoint)), client_(endpoint_.origin) {
    client_.set_connection_timeout(timeout);
    client_.set_read_timeout(timeout);
    client_.set_write_timeout(timeout);
  }

  ActionCommand step(const Observation& observation) override {
    auto body = to_json(observation).dump();
    auto res = client_.Post(endpoint_.path, body, "application/json");
    if (!res) {
      throw Error(ErrorCode::kAgentError,
                  "agent request failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kAgentError,
                  "agent answered HTTP " + std::to_string(res->status));
    }
    auto doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::kAgentError, "agent reply is not JSON");
    auto cmd = command_from_json(doc);
    try {
      validate_command_shape(cmd);
    } catch (const Error& e) {
      throw Error(ErrorCode::kAgentError, e.what());
    }
    return cmd;
  }

 private:
  Endpoint endpoint_;
  httplib::Client client_;
};

class RemoteAgentFactory : public AgentFactory {
 public:
  RemoteAgentFactory(std::string url, std::chrono::milliseconds timeout)
      : url_(std::move(url)), endpoint_(split_endpoint(url_)), timeout_(timeout) {}

  AgentIdentity identity() const override { return {url_, "remote"}; }

  std::unique_ptr<Agent> create(const std::string&, std::uint64_t) const override {
    return std::make_unique<RemoteAgent>(endpoint_, timeout_);
  }

 private:
  std::string url_;
  Endpoint endpoint_;
  std::chrono::milliseconds timeout_;
};

}  // namespace

std::unique_ptr<AgentFactory> make_remote_agent(std::string endpoint,
                                                std::chrono::milliseconds step_timeout) {
  return std::make_unique<RemoteAgentFactory>(std::move(endpoint), step_timeout);
}

}  // namespace websuite
