#include "http_bridge.hpp"

#include <httplib.h>

#include <vector>

#include "rvasm/error.hpp"
#include "rvasm/protocol.hpp"

namespace rvasm::server {

using nlohmann::json;

namespace {

constexpr const char* kPrefix = "/api/session";

json error_reply(ErrorCode code, const std::string& message) {
  Response r;
  r.ok = false;
  r.error_code = std::string(error_code_name(code));
  r.error_message = message;
  return {{"response", r.to_json()}, {"events", json::array()}};
}

}  // namespace

struct HttpBridge::Slot {
  std::mutex run_mutex;
  std::mutex event_mutex;
  std::vector<json> events;
  Endpoint endpoint{[this](const json& event) {
    std::lock_guard<std::mutex> lock(event_mutex);
    events.push_back(event);
  }};

  json handle(const json& message) {
    if (Endpoint::is_interrupt(message)) {
      return {{"response", endpoint.handle(message)}, {"events", json::array()}};
    }
    std::lock_guard<std::mutex> run_lock(run_mutex);
    json response = endpoint.handle(message);
    std::lock_guard<std::mutex> lock(event_mutex);
    json out = {{"response", std::move(response)}, {"events", std::move(events)}};
    events.clear();
    return out;
  }
};

HttpBridge::HttpBridge() : server_(std::make_unique<httplib::Server>()) {
  server_->Post(R"(/api/session(/[A-Za-z0-9]+)?)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  const json reply = post(req.path, req.body);
                  res.set_content(reply.dump(), "application/json");
                });
}

HttpBridge::~HttpBridge() { stop(); }

std::shared_ptr<HttpBridge::Slot> HttpBridge::find(const std::string& id) {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto it = slots_.find(id);
  return it == slots_.end() ? nullptr : it->second;
}

json HttpBridge::post(const std::string& path, const std::string& body) {
  json message = json::parse(body, nullptr, false);
  if (message.is_discarded() || !message.is_object()) {
    return error_reply(ErrorCode::kBadRequest, "body must be a JSON object");
  }
  const std::string prefix = kPrefix;
  if (path == prefix) {
    if (message.value("type", json()) != "open") {
      return error_reply(ErrorCode::kBadRequest, "POST /api/session takes an open request");
    }
    auto slot = std::make_shared<Slot>();
    json reply = slot->handle(message);
    const json& response = reply["response"];
    if (response.value("ok", false)) {
      std::lock_guard<std::mutex> lock(mutex_);
      slots_[response["result"]["session"].get<std::string>()] = slot;
    }
    return reply;
  }
  if (path.rfind(prefix + "/", 0) != 0) {
    return error_reply(ErrorCode::kBadRequest, "unknown path");
  }
  const std::string id = path.substr(prefix.size() + 1);
  auto slot = find(id);
  if (!slot) return error_reply(ErrorCode::kUnknownSession, "unknown session '" + id + "'");
  if (message.value("type", json()) == "open") {
    return error_reply(ErrorCode::kBadRequest, "open creates a new session; POST /api/session");
  }
  json reply = slot->handle(message);
  if (message.value("type", json()) == "close" && reply["response"].value("ok", false)) {
    std::lock_guard<std::mutex> lock(mutex_);
    slots_.erase(id);
  }
  return reply;
}

int HttpBridge::bind(std::uint16_t port) {
  if (port == 0) return server_->bind_to_any_port("127.0.0.1");
  return server_->bind_to_port("127.0.0.1", port) ? port : -1;
}

void HttpBridge::listen() { server_->listen_after_bind(); }

void HttpBridge::stop() {
  if (server_) server_->stop();
}

}  // namespace rvasm::server
