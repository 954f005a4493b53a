#include "tcp_server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rvasm/error.hpp"
#include "rvasm/protocol.hpp"

namespace rvasm::server {

namespace {

constexpr std::size_t kMaxLineBytes = 1 << 20;

[[noreturn]] void fail(const char* what) {
  throw std::runtime_error(std::string(what) + ": " + std::strerror(errno));
}

void write_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) return;
    sent += static_cast<std::size_t>(n);
  }
}

}  // namespace

TcpServer::TcpServer(std::uint16_t port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) fail("socket");
  const int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) fail("bind");
  if (::listen(listen_fd_, 16) < 0) fail("listen");
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpServer::~TcpServer() {
  shutdown();
  std::vector<std::thread> threads;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    threads.swap(connections_);
  }
  for (auto& t : threads) t.join();
}

void TcpServer::shutdown() {
  running_ = false;
  std::lock_guard<std::mutex> lock(mutex_);
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
}

void TcpServer::serve() {
  while (running_) {
    int listen_fd;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      listen_fd = listen_fd_;
    }
    if (listen_fd < 0) break;
    const int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd < 0) {
      if (!running_) break;
      if (errno == EINTR || errno == ECONNABORTED) continue;
      break;
    }
    std::lock_guard<std::mutex> lock(mutex_);
    if (!running_) {
      ::close(fd);
      break;
    }
    open_fds_.push_back(fd);
    connections_.emplace_back([this, fd] { handle_connection(fd); });
  }
}

void TcpServer::handle_connection(int fd) {
  std::mutex write_mutex;
  auto send_line = [&](const nlohmann::json& message) {
    std::lock_guard<std::mutex> lock(write_mutex);
    write_all(fd, message.dump() + "\n");
  };
  Endpoint endpoint(send_line);

  std::mutex queue_mutex;
  std::condition_variable queue_cv;
  std::deque<nlohmann::json> queue;
  bool closed = false;

  std::thread worker([&] {
    for (;;) {
      nlohmann::json message;
      {
        std::unique_lock<std::mutex> lock(queue_mutex);
        queue_cv.wait(lock, [&] { return closed || !queue.empty(); });
        if (queue.empty()) return;
        message = std::move(queue.front());
        queue.pop_front();
      }
      send_line(endpoint.handle(message));
    }
  });

  std::string buffer;
  char chunk[4096];
  bool overflow = false;
  for (;;) {
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t newline;
    while ((newline = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, newline);
      buffer.erase(0, newline + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      nlohmann::json message = nlohmann::json::parse(line, nullptr, false);
      if (message.is_discarded()) {
        Response r;
        r.ok = false;
        r.error_code = std::string(error_code_name(ErrorCode::kBadRequest));
        r.error_message = "message is not valid JSON";
        send_line(r.to_json());
        continue;
      }
      if (Endpoint::is_interrupt(message)) {
        send_line(endpoint.handle(message));
        continue;
      }
      std::lock_guard<std::mutex> lock(queue_mutex);
      queue.push_back(std::move(message));
      queue_cv.notify_one();
    }
    if (buffer.size() > kMaxLineBytes) {
      overflow = true;
      break;
    }
  }
  if (overflow) {
    Response r;
    r.ok = false;
    r.error_code = std::string(error_code_name(ErrorCode::kBadRequest));
    r.error_message = "message exceeds the line size limit";
    send_line(r.to_json());
  }
  endpoint.interrupt();
  {
    std::lock_guard<std::mutex> lock(queue_mutex);
    closed = true;
    queue_cv.notify_one();
  }
  worker.join();
  std::lock_guard<std::mutex> lock(mutex_);
  open_fds_.erase(std::remove(open_fds_.begin(), open_fds_.end(), fd), open_fds_.end());
  ::close(fd);
}

}  // namespace rvasm::server
