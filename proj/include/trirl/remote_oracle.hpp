#ifndef TRIRL_REMOTE_ORACLE_HPP
#define TRIRL_REMOTE_ORACLE_HPP

#include <chrono>
#include <memory>
#include <string>

#include "trirl/oracle.hpp"
#include "trirl/wire.hpp"

namespace trirl {

/// Line-oriented byte stream to a bridge. All failures surface as TransportError.
class LineTransport {
public:
  virtual ~LineTransport() = default;
  virtual void open() = 0;
  virtual void close() = 0;
  virtual bool is_open() const = 0;
  virtual void send_line(const std::string &line) = 0;
  virtual std::string read_line(std::chrono::milliseconds timeout) = 0;
  virtual std::string describe() const = 0;
};

std::unique_ptr<LineTransport> make_tcp_transport(std::string host, std::uint16_t port);
/// Spawns `/bin/sh -c command` and talks to its stdin/stdout.
std::unique_ptr<LineTransport> make_stdio_transport(std::string command);

struct RemoteOptions {
  std::chrono::milliseconds timeout{30000};
  /// Extra attempts after a transport failure (reconnect + handshake each time).
  int max_retries = 3;
};

/// Oracle backed by a bridge process speaking the wire protocol. The
/// handshake runs in the constructor; requests are strictly sequential.
class RemoteOracle : public Oracle {
public:
  RemoteOracle(std::unique_ptr<LineTransport> transport, RemoteOptions options = {});

  Label predict(const ImageTensor &img) override;
  std::uint32_t num_classes() const override { return hello_.classes; }
  Shape input_shape() const override { return hello_.shape; }
  std::string describe() const override { return "remote:" + transport_->describe(); }

private:
  void connect();
  nlohmann::json round_trip(const nlohmann::json &request);

  std::unique_ptr<LineTransport> transport_;
  RemoteOptions options_;
  wire::Hello hello_;
  std::uint64_t next_id_ = 1;
};

} // namespace trirl

#endif // TRIRL_REMOTE_ORACLE_HPP
