#ifndef RVASM_TOOLS_HTTP_BRIDGE_HPP_
#define RVASM_TOOLS_HTTP_BRIDGE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

namespace httplib {
class Server;
}

namespace rvasm::server {

// Request/response bridge for clients that cannot hold a socket open.
//   POST /api/session        body: an open request
//   POST /api/session/<id>   body: any other request
// Each reply is {"response": <protocol response>, "events": [...]} where
// events are those emitted while the request ran.
class HttpBridge {
 public:
  HttpBridge();
  ~HttpBridge();

  // Handles one POST without a network round trip.
  nlohmann::json post(const std::string& path, const std::string& body);

  // Binds 127.0.0.1:port (0 picks a free port) and returns the bound port.
  int bind(std::uint16_t port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  struct Slot;
  std::shared_ptr<Slot> find(const std::string& id);

  std::unique_ptr<httplib::Server> server_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
};

}  // namespace rvasm::server

#endif  // RVASM_TOOLS_HTTP_BRIDGE_HPP_
