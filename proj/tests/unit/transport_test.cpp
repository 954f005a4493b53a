#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <httplib.h>

#include <thread>

#include "http_bridge.hpp"
#include "rvasm/protocol.hpp"
#include "support/test_data.hpp"
#include "tcp_server.hpp"

namespace rvasm {
namespace {

using nlohmann::json;

class LineClient {
 public:
  explicit LineClient(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    connected_ = ::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0;
  }
  ~LineClient() { ::close(fd_); }

  bool connected() const { return connected_; }
  void send(const json& message) { send_raw(message.dump() + "\n"); }
  void send_raw(const std::string& data) { ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL); }

  json receive() {
    for (;;) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        const std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return json::parse(line);
      }
      char chunk[4096];
      const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n <= 0) return nullptr;
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  // Next message that is a response (skips events).
  json response() {
    for (;;) {
      json m = receive();
      if (m.is_null() || m.contains("ok")) return m;
    }
  }

 private:
  int fd_ = -1;
  bool connected_ = false;
  std::string buffer_;
};

json request(int id, const std::string& type, json fields = json::object()) {
  fields["v"] = 1;
  fields["id"] = id;
  fields["type"] = type;
  return fields;
}

class Tcp : public ::testing::Test {
 protected:
  void SetUp() override {
    server_ = std::make_unique<server::TcpServer>(0);
    thread_ = std::thread([this] { server_->serve(); });
  }
  void TearDown() override {
    server_->shutdown();
    thread_.join();
    server_.reset();
  }
  std::unique_ptr<server::TcpServer> server_;
  std::thread thread_;
};

TEST_F(Tcp, RequestsAndEvents) {
  LineClient c(server_->port());
  ASSERT_TRUE(c.connected());
  c.send(request(1, "open", {{"text", testing::read_text("fixtures/sum.s")}}));
  const json opened = c.response();
  ASSERT_TRUE(opened["ok"]) << opened;
  c.send(request(2, "control", {{"command", "reset"}}));
  EXPECT_TRUE(c.response()["ok"]);
  c.send(request(3, "control", {{"command", "animate"}, {"max_steps", 2}}));
  EXPECT_EQ(c.receive()["event"], "step");
  EXPECT_EQ(c.receive()["event"], "step");
  const json animated = c.receive();
  EXPECT_EQ(animated["id"], 3);
  EXPECT_EQ(animated["result"]["steps"], 2);
  c.send_raw("not json\n");
  EXPECT_EQ(c.response()["error"]["code"], "BadRequest");
  c.send(request(4, "control", {{"command", "run"}}));
  EXPECT_EQ(c.response()["result"]["output"], "55");
}

TEST_F(Tcp, StopInterruptsALongRun) {
  LineClient c(server_->port());
  ASSERT_TRUE(c.connected());
  c.send(request(1, "open", {{"text", "loop:\nj loop"}}));
  c.response();
  c.send(request(2, "control", {{"command", "reset"}}));
  c.response();
  c.send(request(3, "control", {{"command", "run"}, {"max_steps", 4000000000ull}}));
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  c.send(request(4, "control", {{"command", "stop"}}));
  json first = c.response();
  json second = c.response();
  if (first["id"] == 3) std::swap(first, second);
  EXPECT_EQ(first["id"], 4);
  EXPECT_EQ(second["id"], 3);
  EXPECT_EQ(second["result"]["stop_reason"], "step_limit");
  EXPECT_LT(second["result"]["steps"].get<std::uint64_t>(), 4000000000ull);
}

TEST_F(Tcp, SessionsAreIndependentPerConnection) {
  LineClient a(server_->port());
  LineClient b(server_->port());
  a.send(request(1, "open", {{"text", "nop"}}));
  b.send(request(1, "open", {{"text", "nop\nnop"}}));
  const json ra = a.response();
  const json rb = b.response();
  EXPECT_NE(ra["result"]["session"], rb["result"]["session"]);
  a.send(request(2, "query", {{"pane", "text"}}));
  EXPECT_EQ(a.response()["result"]["lines"], 1);
  b.send(request(2, "query", {{"pane", "text"}}));
  EXPECT_EQ(b.response()["result"]["lines"], 2);
}

TEST(HttpBridge, DirectPosts) {
  server::HttpBridge bridge;
  const json opened = bridge.post("/api/session", request(1, "open", {{"text", "nop\nli a7, 10\necall"}}).dump());
  ASSERT_TRUE(opened["response"]["ok"]) << opened;
  const std::string id = opened["response"]["result"]["session"];
  const std::string path = "/api/session/" + id;
  bridge.post(path, request(2, "control", {{"command", "reset"}}).dump());
  const json animated = bridge.post(path, request(3, "control", {{"command", "animate"}, {"max_steps", 2}}).dump());
  EXPECT_EQ(animated["events"].size(), 2u);
  EXPECT_EQ(bridge.post("/api/session/nope", request(4, "close").dump())["response"]["error"]["code"],
            "UnknownSession");
  EXPECT_TRUE(bridge.post(path, request(5, "close").dump())["response"]["ok"]);
  EXPECT_EQ(bridge.post(path, request(6, "close").dump())["response"]["error"]["code"], "UnknownSession");
}

TEST(HttpBridge, OverTheNetwork) {
  server::HttpBridge bridge;
  const int port = bridge.bind(0);
  ASSERT_GT(port, 0);
  std::thread t([&] { bridge.listen(); });
  httplib::Client client("127.0.0.1", port);
  auto res = client.Post("/api/session", request(1, "open", {{"text", "nop"}}).dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const json body = json::parse(res->body);
  EXPECT_TRUE(body["response"]["ok"]);
  bridge.stop();
  t.join();
}

}  // namespace
}  // namespace rvasm
