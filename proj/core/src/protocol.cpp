#include "rvasm/protocol.hpp"

#include <random>

#include "rvasm/edit_trace.hpp"
#include "rvasm/error.hpp"

namespace rvasm {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultRunSteps = 1'000'000;
constexpr std::uint64_t kDefaultAnimateSteps = 10'000;

[[noreturn]] void bad(const std::string& message) { throw Error(ErrorCode::kBadRequest, message); }

std::uint64_t unsigned_field(const json& body, const char* name,
                             std::optional<std::uint64_t> fallback = std::nullopt) {
  const auto it = body.find(name);
  if (it == body.end()) {
    if (fallback) return *fallback;
    bad(std::string("missing field '") + name + "'");
  }
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  if (it->is_number_integer() && it->get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(it->get<std::int64_t>());
  }
  bad(std::string("field '") + name + "' must be a non-negative integer");
}

std::uint32_t address_field(const json& body, const char* name) {
  const std::uint64_t v = unsigned_field(body, name);
  if (v > 0xFFFF'FFFFull) bad(std::string("field '") + name + "' exceeds 32 bits");
  return static_cast<std::uint32_t>(v);
}

std::string string_field(const json& body, const char* name, std::string fallback) {
  const auto it = body.find(name);
  if (it == body.end()) return fallback;
  if (!it->is_string()) bad(std::string("field '") + name + "' must be a string");
  return it->get<std::string>();
}

AssemblyMode mode_field(const json& body, AssemblyMode fallback) {
  const auto it = body.find("mode");
  if (it == body.end()) return fallback;
  if (!it->is_string()) bad("field 'mode' must be a string");
  const auto mode = assembly_mode_from_name(it->get<std::string>());
  if (!mode) bad("mode must be 'full' or 'incremental'");
  return *mode;
}

json error_response(const json& id, ErrorCode code, const std::string& message) {
  Response r;
  r.id = id;
  r.ok = false;
  r.error_code = std::string(error_code_name(code));
  r.error_message = message;
  return r.to_json();
}

}  // namespace

Request Request::from_json(const json& message) {
  if (!message.is_object()) bad("a request must be a JSON object");
  const auto v = message.find("v");
  if (v == message.end() || !v->is_number_integer() || v->get<int>() != kProtocolVersion) {
    bad("unsupported protocol version; expected \"v\": 1");
  }
  Request r;
  r.id = message.value("id", json(nullptr));
  const auto type = message.find("type");
  if (type == message.end() || !type->is_string()) bad("a request needs a string 'type'");
  r.type = type->get<std::string>();
  r.body = message;
  return r;
}

json Request::to_json() const {
  json out = body.is_object() ? body : json::object();
  out["v"] = kProtocolVersion;
  out["id"] = id;
  out["type"] = type;
  return out;
}

Response Response::from_json(const json& message) {
  if (!message.is_object() || !message.contains("ok") || !message["ok"].is_boolean()) {
    bad("a response needs a boolean 'ok'");
  }
  Response r;
  r.id = message.value("id", json(nullptr));
  r.ok = message["ok"].get<bool>();
  if (r.ok) {
    r.result = message.value("result", json(nullptr));
  } else {
    const json& e = message.at("error");
    r.error_code = e.at("code").get<std::string>();
    r.error_message = e.at("message").get<std::string>();
  }
  return r;
}

json Response::to_json() const {
  json out = {{"v", kProtocolVersion}, {"id", id}, {"ok", ok}};
  if (ok) {
    out["result"] = result;
  } else {
    out["error"] = {{"code", error_code}, {"message", error_message}};
  }
  return out;
}

json make_event(std::string_view name, const std::string& session, const json& data) {
  return {{"v", kProtocolVersion}, {"event", name}, {"session", session}, {"data", data}};
}

std::string new_session_id() {
  static std::mt19937_64 rng{std::random_device{}()};
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  char buf[24];
  std::snprintf(buf, sizeof buf, "s%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

Endpoint::Endpoint(EventSink sink) : sink_(std::move(sink)) {}

std::shared_ptr<Session> Endpoint::session() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return session_;
}

Session& Endpoint::require_session() const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!session_) throw Error(ErrorCode::kUnknownSession, "no open session; send 'open' first");
  return *session_;
}

void Endpoint::interrupt() {
  if (auto s = session()) s->request_stop();
}

bool Endpoint::is_interrupt(const json& message) {
  return message.is_object() && message.value("type", json()) == "control" &&
         message.value("command", json()) == "stop";
}

json Endpoint::handle(const json& message) {
  const json id = message.is_object() ? message.value("id", json(nullptr)) : json(nullptr);
  try {
    const Request request = Request::from_json(message);
    Response r;
    r.id = request.id;
    r.result = dispatch(request);
    return r.to_json();
  } catch (const Error& e) {
    return error_response(id, e.code(), e.what());
  } catch (const json::exception& e) {
    return error_response(id, ErrorCode::kBadRequest, e.what());
  }
}

std::string Endpoint::handle_line(std::string_view line) {
  json message = json::parse(line, nullptr, false);
  if (message.is_discarded()) {
    return error_response(nullptr, ErrorCode::kBadRequest, "message is not valid JSON").dump();
  }
  return handle(message).dump();
}

json Endpoint::dispatch(const Request& request) {
  const json& body = request.body;
  const std::string& type = request.type;

  if (type == "open") {
    auto session = std::make_shared<Session>(new_session_id(), string_field(body, "text", ""),
                                             mode_field(body, AssemblyMode::kIncremental));
    {
      std::lock_guard<std::mutex> lock(mutex_);
      session_ = session;
    }
    return {{"session", session->id()},
            {"mode", assembly_mode_name(session->mode())},
            {"lines", session->document().line_count()},
            {"text_size", session->state().image.text_size()},
            {"data_size", session->state().image.data_size()},
            {"diagnostics", session->query_diagnostics()}};
  }
  if (type == "close") {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!session_) throw Error(ErrorCode::kUnknownSession, "no open session");
    session_.reset();
    return {{"closed", true}};
  }

  Session& session = require_session();
  auto emit = [&](std::string_view name, const json& data) {
    if (sink_) sink_(make_event(name, session.id(), data));
  };
  auto report_json = [&](const ExecutionReport& report) {
    if (report.awaiting_input) emit("input_request", json::object());
    return to_json(report);
  };
  const Session::AnimateSink step_sink = [&](const json& step) { emit("step", step); };

  if (type == "edit") {
    const auto it = body.find("event");
    if (it == body.end()) bad("edit needs an 'event'");
    const Delta delta = session.apply_edit(edit_event_from_json(*it));
    return {{"delta", to_json(delta)},
            {"diagnostics", session.query_diagnostics()},
            {"machine_stale", session.machine_stale()}};
  }
  if (type == "control") {
    const std::string command = string_field(body, "command", "");
    if (command == "reset") return report_json(session.control(ControlCommand::kReset));
    if (command == "step") return report_json(session.control(ControlCommand::kStep));
    if (command == "run") {
      return report_json(session.control(ControlCommand::kRun,
                                         unsigned_field(body, "max_steps", kDefaultRunSteps)));
    }
    if (command == "animate") {
      return report_json(session.control(ControlCommand::kAnimate,
                                         unsigned_field(body, "max_steps", kDefaultAnimateSteps),
                                         step_sink));
    }
    if (command == "stop") {
      session.request_stop();
      return {{"stopping", true}};
    }
    if (command == "set_mode") {
      session.set_mode(mode_field(body, session.mode()));
      return {{"mode", assembly_mode_name(session.mode())}};
    }
    bad("unknown control command '" + command + "'");
  }
  if (type == "query") {
    const std::string pane = string_field(body, "pane", "");
    if (pane == "registers") return session.query_registers();
    if (pane == "memory") {
      return session.query_memory(address_field(body, "start"), address_field(body, "length"));
    }
    if (pane == "disassembly") {
      return session.query_disassembly(address_field(body, "start"), address_field(body, "count"));
    }
    if (pane == "diagnostics") return session.query_diagnostics();
    if (pane == "symbols") return session.query_symbols();
    if (pane == "text") return session.query_text();
    if (pane == "explain") return session.query_explain(body.value("explain", json(nullptr)));
    bad("unknown pane '" + pane + "'");
  }
  if (type == "input") {
    const auto it = body.find("value");
    if (it == body.end() || !it->is_number_integer()) bad("input needs an integer 'value'");
    const auto value = it->get<std::int64_t>();
    if (value < INT32_MIN || value > INT32_MAX) bad("input value exceeds 32 bits");
    const auto report = session.provide_input(static_cast<std::int32_t>(value), step_sink);
    if (!report) return {{"queued", true}};
    return report_json(*report);
  }
  bad("unknown request type '" + type + "'");
}

}  // namespace rvasm
