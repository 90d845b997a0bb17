#include <doctest.h>

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "trirl/error.hpp"
#include "trirl/oracle.hpp"
#include "trirl/oracle_spec.hpp"
#include "trirl/remote_oracle.hpp"
#include "trirl/tnsr_io.hpp"
#include "trirl/wire.hpp"

using namespace trirl;
using namespace std::chrono_literals;

namespace {

const std::string kBridge = FAKE_BRIDGE;

// fake_bridge --tcp in a child process; reads the port it bound.
class TcpBridge {
public:
  explicit TcpBridge(const std::string &mode) {
    int fds[2];
    REQUIRE(::pipe(fds) == 0);
    pid_ = ::fork();
    if (pid_ == 0) {
      ::dup2(fds[1], STDOUT_FILENO);
      ::close(fds[0]);
      ::execl(kBridge.c_str(), kBridge.c_str(), "--tcp", mode.c_str(), static_cast<char *>(nullptr));
      ::_exit(127);
    }
    ::close(fds[1]);
    std::string text;
    char c;
    while (::read(fds[0], &c, 1) == 1 && c != '\n')
      text += c;
    ::close(fds[0]);
    port_ = static_cast<std::uint16_t>(std::stoi(text));
  }
  ~TcpBridge() {
    ::kill(pid_, SIGTERM);
    ::waitpid(pid_, nullptr, 0);
  }
  std::uint16_t port() const { return port_; }

private:
  pid_t pid_ = -1;
  std::uint16_t port_ = 0;
};

ImageTensor image_with_first(double v) {
  ImageTensor img({2, 2, 1}, 0.25);
  img[0] = v;
  return img;
}

RemoteOptions fast_options() {
  RemoteOptions o;
  o.timeout = 500ms;
  return o;
}

} // namespace

TEST_CASE("base64") {
  const std::vector<std::uint8_t> raw{0, 1, 2, 250, 251, 252, 253};
  for (std::size_t n = 0; n <= raw.size(); ++n) {
    const std::vector<std::uint8_t> part(raw.begin(), raw.begin() + static_cast<long>(n));
    CHECK(wire::base64_decode(wire::base64_encode(part)) == part);
  }
  CHECK(wire::base64_encode(std::vector<std::uint8_t>{'M', 'a', 'n'}) == "TWFu");
  CHECK(wire::base64_encode(std::vector<std::uint8_t>{'M'}) == "TQ==");
  CHECK_THROWS_AS(wire::base64_decode("T$=="), ProtocolError);
  CHECK_THROWS_AS(wire::base64_decode("TQ="), ProtocolError);
}

TEST_CASE("classify message layout") {
  const ImageTensor img({2, 1, 1}, std::vector<double>{0.5, 1.0});
  const auto msg = wire::classify_request(7, img);
  CHECK(msg["op"] == "classify");
  CHECK(msg["id"] == 7);
  CHECK(msg["dtype"] == "f32le");
  CHECK(msg["shape"] == nlohmann::json::array({2, 1, 1}));
  CHECK(wire::base64_decode(msg["data"].get<std::string>()) == encode_f32le(img.data()));
  const auto back = wire::parse_classify_request(msg);
  CHECK(back.id == 7);
  CHECK(back.image == img);
  auto bad = msg;
  bad["shape"] = nlohmann::json::array({3, 1, 1});
  CHECK_THROWS_AS(wire::parse_classify_request(bad), ProtocolError);
  CHECK_THROWS_AS(wire::parse_line("{not json"), ProtocolError);
}

TEST_CASE("hello handshake message") {
  const auto reply = wire::hello_reply({10, {32, 32, 3}});
  CHECK(reply.dump() == R"({"classes":10,"op":"hello","shape":[32,32,3],"version":1})");
  const auto h = wire::parse_hello_reply(reply);
  CHECK(h.classes == 10);
  CHECK(h.shape == Shape{32, 32, 3});
  auto wrong = reply;
  wrong["version"] = 2;
  CHECK_THROWS_AS(wire::parse_hello_reply(wrong), ProtocolError);
}

TEST_CASE("stdio round trip against the scripted bridge") {
  RemoteOracle o(make_stdio_transport(kBridge + " echo"), fast_options());
  CHECK(o.num_classes() == 3);
  CHECK(o.input_shape() == Shape{2, 2, 1});
  CHECK(o.predict(image_with_first(2.0)).class_index == 2);
  CHECK(o.predict(image_with_first(1.5)).class_index == 1);
  CHECK(o.predict(image_with_first(0.0)).class_index == 0);
  CHECK_THROWS_AS(o.predict(ImageTensor({3, 1, 1})), ShapeMismatch);
}

TEST_CASE("tcp round trip against the scripted bridge") {
  TcpBridge bridge("echo");
  auto oracle = make_oracle("remote:tcp:127.0.0.1:" + std::to_string(bridge.port()), {}, fast_options());
  CHECK(oracle->predict(image_with_first(1.0)).class_index == 1);
  CHECK(oracle->predict(image_with_first(2.0)).class_index == 2);
}

TEST_CASE("protocol violations") {
  RemoteOracle bad(make_stdio_transport(kBridge + " bad-label"), fast_options());
  CHECK_THROWS_AS(bad.predict(image_with_first(0.0)), ProtocolError);
  RemoteOracle wrong(make_stdio_transport(kBridge + " wrong-id"), fast_options());
  CHECK_THROWS_AS(wrong.predict(image_with_first(0.0)), ProtocolError);
  RemoteOracle err(make_stdio_transport(kBridge + " error"), fast_options());
  CHECK_THROWS_AS(err.predict(image_with_first(0.0)), RemoteError);
}

TEST_CASE("closed mid-reply: transport error, no budget consumed") {
  for (const std::string spec : {"remote:stdio:" + kBridge + " close", std::string("tcp")}) {
    std::unique_ptr<TcpBridge> tcp;
    std::string s = spec;
    if (spec == "tcp") {
      tcp = std::make_unique<TcpBridge>("close");
      s = "remote:tcp:127.0.0.1:" + std::to_string(tcp->port());
    }
    auto oracle = make_oracle(s, {}, fast_options());
    BudgetedOracle budgeted(*oracle, 10);
    CHECK_THROWS_AS(budgeted.classify(image_with_first(1.0)), TransportError);
    CHECK(budgeted.budget().used == 0);
  }
}

TEST_CASE("a dropped connection is retried") {
  TcpBridge bridge("flaky");
  auto oracle = make_oracle("remote:tcp:127.0.0.1:" + std::to_string(bridge.port()), {}, fast_options());
  BudgetedOracle budgeted(*oracle, 10);
  CHECK(budgeted.classify(image_with_first(2.0)).label.class_index == 2);
  CHECK(budgeted.budget().used == 1);
}

TEST_CASE("silent bridge times out") {
  RemoteOptions o;
  o.timeout = 100ms;
  o.max_retries = 1;
  RemoteOracle silent(make_stdio_transport(kBridge + " silent"), o);
  const auto t0 = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(silent.predict(image_with_first(0.0)), TransportError);
  CHECK(std::chrono::steady_clock::now() - t0 < 5s);
}

TEST_CASE("connection refused") {
  RemoteOptions o;
  o.timeout = 100ms;
  // bind and release a port so nothing listens on it
  int port = 0;
  {
    TcpBridge probe("echo");
    port = probe.port();
  }
  CHECK_THROWS_AS(make_oracle("remote:tcp:127.0.0.1:" + std::to_string(port), {}, o), TransportError);
}
