#include "trirl/remote_oracle.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <spdlog/spdlog.h>

#include "trirl/error.hpp"

namespace trirl {

namespace {

std::string errno_text() { return std::strerror(errno); }

// Buffered line reader over a readable fd.
class LineReader {
public:
  void reset() { buffer_.clear(); }

  std::string read_line(int fd, std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0)
        throw TransportError("timed out waiting for a reply");
      pollfd pfd{fd, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (ready < 0) {
        if (errno == EINTR)
          continue;
        throw TransportError("poll failed: " + errno_text());
      }
      if (ready == 0)
        throw TransportError("timed out waiting for a reply");
      char chunk[4096];
      const ssize_t n = ::read(fd, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN)
          continue;
        throw TransportError("read failed: " + errno_text());
      }
      if (n == 0)
        throw TransportError("connection closed by peer");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

private:
  std::string buffer_;
};

void write_all(int fd, const std::string &data, bool socket) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = socket ? ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL)
                             : ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR)
        continue;
      throw TransportError("write failed: " + errno_text());
    }
    off += static_cast<std::size_t>(n);
  }
}

class TcpTransport : public LineTransport {
public:
  TcpTransport(std::string host, std::uint16_t port) : host_(std::move(host)), port_(port) {}
  ~TcpTransport() override { close(); }

  void open() override {
    close();
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo *res = nullptr;
    const std::string port = std::to_string(port_);
    if (const int rc = ::getaddrinfo(host_.c_str(), port.c_str(), &hints, &res); rc != 0)
      throw TransportError("cannot resolve " + host_ + ": " + ::gai_strerror(rc));
    std::string last_error = "no addresses";
    for (addrinfo *ai = res; ai; ai = ai->ai_next) {
      const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) {
        last_error = errno_text();
        continue;
      }
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
        fd_ = fd;
        break;
      }
      last_error = errno_text();
      ::close(fd);
    }
    ::freeaddrinfo(res);
    if (fd_ < 0)
      throw TransportError("cannot connect to " + describe() + ": " + last_error);
    reader_.reset();
  }

  void close() override {
    if (fd_ >= 0)
      ::close(fd_);
    fd_ = -1;
  }

  bool is_open() const override { return fd_ >= 0; }

  void send_line(const std::string &line) override {
    if (fd_ < 0)
      throw TransportError("not connected");
    write_all(fd_, line + "\n", true);
  }

  std::string read_line(std::chrono::milliseconds timeout) override {
    if (fd_ < 0)
      throw TransportError("not connected");
    return reader_.read_line(fd_, timeout);
  }

  std::string describe() const override { return "tcp:" + host_ + ":" + std::to_string(port_); }

private:
  std::string host_;
  std::uint16_t port_;
  int fd_ = -1;
  LineReader reader_;
};

class StdioTransport : public LineTransport {
public:
  explicit StdioTransport(std::string command) : command_(std::move(command)) {
    std::signal(SIGPIPE, SIG_IGN);
  }
  ~StdioTransport() override { close(); }

  void open() override {
    close();
    int to_child[2], from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0)
      throw TransportError("pipe failed: " + errno_text());
    if (::pipe2(from_child, O_CLOEXEC) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw TransportError("pipe failed: " + errno_text());
    }
    const pid_t pid = ::fork();
    if (pid < 0)
      throw TransportError("fork failed: " + errno_text());
    if (pid == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char *>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    pid_ = pid;
    in_ = to_child[1];
    out_ = from_child[0];
    reader_.reset();
  }

  void close() override {
    if (in_ >= 0)
      ::close(in_);
    if (out_ >= 0)
      ::close(out_);
    in_ = out_ = -1;
    if (pid_ > 0) {
      ::kill(pid_, SIGTERM);
      ::waitpid(pid_, nullptr, 0);
    }
    pid_ = -1;
  }

  bool is_open() const override { return pid_ > 0; }

  void send_line(const std::string &line) override {
    if (in_ < 0)
      throw TransportError("bridge process not running");
    write_all(in_, line + "\n", false);
  }

  std::string read_line(std::chrono::milliseconds timeout) override {
    if (out_ < 0)
      throw TransportError("bridge process not running");
    return reader_.read_line(out_, timeout);
  }

  std::string describe() const override { return "stdio:" + command_; }

private:
  std::string command_;
  pid_t pid_ = -1;
  int in_ = -1;
  int out_ = -1;
  LineReader reader_;
};

} // namespace

std::unique_ptr<LineTransport> make_tcp_transport(std::string host, std::uint16_t port) {
  return std::make_unique<TcpTransport>(std::move(host), port);
}

std::unique_ptr<LineTransport> make_stdio_transport(std::string command) {
  return std::make_unique<StdioTransport>(std::move(command));
}

RemoteOracle::RemoteOracle(std::unique_ptr<LineTransport> transport, RemoteOptions options)
    : transport_(std::move(transport)), options_(options) {
  connect();
}

void RemoteOracle::connect() {
  transport_->open();
  transport_->send_line(wire::hello_request().dump());
  const std::string line = transport_->read_line(options_.timeout);
  const wire::Hello hello = wire::parse_hello_reply(wire::parse_line(line));
  if (hello_.classes != 0 && (hello.classes != hello_.classes || hello.shape != hello_.shape))
    throw ProtocolError("bridge changed its declared classes or shape after reconnecting");
  hello_ = hello;
  spdlog::debug("connected to {}: {} classes, {}x{}x{}", transport_->describe(), hello_.classes,
                hello_.shape.width, hello_.shape.height, hello_.shape.channels);
}

nlohmann::json RemoteOracle::round_trip(const nlohmann::json &request) {
  const std::string payload = request.dump();
  for (int attempt = 0;; ++attempt) {
    try {
      if (!transport_->is_open())
        connect();
      transport_->send_line(payload);
      return wire::parse_line(transport_->read_line(options_.timeout));
    } catch (const TransportError &e) {
      transport_->close();
      if (attempt >= options_.max_retries)
        throw TransportError(describe() + ": " + e.what() + " (gave up after " +
                             std::to_string(attempt + 1) + " attempts)");
      spdlog::info("transport failure on {} ({}), retrying", describe(), e.what());
    }
  }
}

Label RemoteOracle::predict(const ImageTensor &img) {
  check_input_shape(*this, img);
  const std::uint64_t id = next_id_++;
  const nlohmann::json reply = round_trip(wire::classify_request(id, img));
  const std::string op = reply.value("op", "");
  if (!reply.contains("id") || reply["id"] != id)
    throw ProtocolError("reply id does not match request id " + std::to_string(id));
  if (op == "error")
    throw RemoteError("bridge error: " + reply.value("message", std::string("(no message)")));
  if (op != "label" || !reply.contains("label") || !reply["label"].is_number_integer())
    throw ProtocolError("expected a label reply");
  const auto label = reply["label"].get<std::int64_t>();
  if (label < 0 || label >= static_cast<std::int64_t>(hello_.classes))
    throw ProtocolError("label " + std::to_string(label) + " outside the declared " +
                        std::to_string(hello_.classes) + " classes");
  return Label{static_cast<std::uint32_t>(label)};
}

} // namespace trirl
