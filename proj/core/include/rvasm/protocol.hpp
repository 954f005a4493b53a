#ifndef RVASM_PROTOCOL_HPP_
#define RVASM_PROTOCOL_HPP_

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rvasm/session.hpp"

// Versioned JSON request/response protocol over one session. Each message
// is a single JSON object; transports frame them one per line.
namespace rvasm {

inline constexpr int kProtocolVersion = 1;

struct Request {
  nlohmann::json id;  // echoed back; any JSON value
  std::string type;   // open, edit, control, query, input, close
  nlohmann::json body = nlohmann::json::object();  // the whole message

  // Throws Error(kBadRequest).
  static Request from_json(const nlohmann::json& message);
  nlohmann::json to_json() const;

  bool operator==(const Request&) const = default;
};

struct Response {
  nlohmann::json id;
  bool ok = true;
  nlohmann::json result;  // when ok
  std::string error_code;  // when not ok
  std::string error_message;

  static Response from_json(const nlohmann::json& message);
  nlohmann::json to_json() const;

  bool operator==(const Response&) const = default;
};

nlohmann::json make_event(std::string_view name, const std::string& session,
                          const nlohmann::json& data);

// Protocol state of one connection: at most one session.
class Endpoint {
 public:
  using EventSink = std::function<void(const nlohmann::json& event)>;

  explicit Endpoint(EventSink sink = {});

  // Never throws; failures become error responses.
  nlohmann::json handle(const nlohmann::json& message);
  std::string handle_line(std::string_view line);

  // Safe from any thread: interrupts a running run or animate.
  void interrupt();

  // True for control/stop messages, which transports deliver out of band.
  static bool is_interrupt(const nlohmann::json& message);

  std::shared_ptr<Session> session() const;

 private:
  nlohmann::json dispatch(const Request& request);
  Session& require_session() const;

  EventSink sink_;
  mutable std::mutex mutex_;
  std::shared_ptr<Session> session_;
};

std::string new_session_id();

}  // namespace rvasm

#endif  // RVASM_PROTOCOL_HPP_
