#ifndef RVASM_TOOLS_TCP_SERVER_HPP_
#define RVASM_TOOLS_TCP_SERVER_HPP_

#include <atomic>
#include <cstdint>
#include <mutex>
#include <thread>
#include <vector>

namespace rvasm::server {

// Newline-delimited JSON over TCP on the loopback interface. Each
// connection owns one protocol endpoint; requests run in order on a worker
// thread while a stop request is applied as soon as it is read.
class TcpServer {
 public:
  // Port 0 picks a free port. Throws std::runtime_error on socket errors.
  explicit TcpServer(std::uint16_t port);
  ~TcpServer();

  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const { return port_; }

  // Accepts connections until shutdown().
  void serve();
  void shutdown();

 private:
  void handle_connection(int fd);

  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{true};
  std::mutex mutex_;
  std::vector<std::thread> connections_;
  std::vector<int> open_fds_;
};

}  // namespace rvasm::server

#endif  // RVASM_TOOLS_TCP_SERVER_HPP_
