#include "trirl/wire.hpp"

#include <array>

#include "trirl/error.hpp"
#include "trirl/tnsr_io.hpp"

namespace trirl::wire {

namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
  if (c >= 'A' && c <= 'Z')
    return c - 'A';
  if (c >= 'a' && c <= 'z')
    return c - 'a' + 26;
  if (c >= '0' && c <= '9')
    return c - '0' + 52;
  if (c == '+')
    return 62;
  if (c == '/')
    return 63;
  return -1;
}

Shape parse_shape(const nlohmann::json &j) {
  if (!j.is_array() || j.size() != 3)
    throw ProtocolError("shape must be an array [w, h, c]");
  for (const auto &e : j)
    if (!e.is_number_unsigned() || e.get<std::uint64_t>() == 0)
      throw ProtocolError("shape entries must be positive integers");
  return Shape{j[0].get<std::uint32_t>(), j[1].get<std::uint32_t>(), j[2].get<std::uint32_t>()};
}

nlohmann::json shape_json(const Shape &s) { return {s.width, s.height, s.channels}; }

} // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = std::uint32_t{bytes[i]} << 16 | std::uint32_t{bytes[i + 1]} << 8 |
                            bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t v = std::uint32_t{bytes[i]} << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    const std::uint32_t v = std::uint32_t{bytes[i]} << 16 | std::uint32_t{bytes[i + 1]} << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0)
    throw ProtocolError("base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    std::array<int, 4> q{};
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=' && last && k >= 2) {
        q[k] = 0;
        ++pad;
        continue;
      }
      if (pad > 0 || (q[k] = decode_char(c)) < 0)
        throw ProtocolError("invalid base64 payload");
    }
    const std::uint32_t v = static_cast<std::uint32_t>(q[0] << 18 | q[1] << 12 | q[2] << 6 | q[3]);
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2)
      out.push_back(static_cast<std::uint8_t>(v >> 8));
    if (pad < 1)
      out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

nlohmann::json hello_request() { return {{"op", "hello"}, {"version", kVersion}}; }

nlohmann::json hello_reply(const Hello &hello) {
  return {{"op", "hello"},
          {"version", kVersion},
          {"classes", hello.classes},
          {"shape", shape_json(hello.shape)}};
}

Hello parse_hello_reply(const nlohmann::json &msg) {
  if (msg.value("op", "") != "hello")
    throw ProtocolError("expected a hello reply");
  if (!msg.contains("version") || msg["version"] != kVersion)
    throw ProtocolError("unsupported protocol version");
  if (!msg.contains("classes") || !msg["classes"].is_number_unsigned() ||
      msg["classes"].get<std::uint64_t>() == 0)
    throw ProtocolError("hello reply needs a positive class count");
  if (!msg.contains("shape"))
    throw ProtocolError("hello reply needs a shape");
  return Hello{msg["classes"].get<std::uint32_t>(), parse_shape(msg["shape"])};
}

nlohmann::json classify_request(std::uint64_t id, const ImageTensor &img) {
  return {{"op", "classify"},
          {"id", id},
          {"dtype", "f32le"},
          {"shape", shape_json(img.shape())},
          {"data", base64_encode(encode_f32le(img.data()))}};
}

ClassifyRequest parse_classify_request(const nlohmann::json &msg) {
  if (msg.value("op", "") != "classify")
    throw ProtocolError("expected a classify request");
  if (!msg.contains("id") || !msg["id"].is_number_unsigned())
    throw ProtocolError("classify request needs an integer id");
  if (msg.value("dtype", "") != "f32le")
    throw ProtocolError("unsupported dtype");
  if (!msg.contains("shape") || !msg.contains("data") || !msg["data"].is_string())
    throw ProtocolError("classify request needs shape and data");
  const Shape shape = parse_shape(msg["shape"]);
  const auto bytes = base64_decode(msg["data"].get<std::string>());
  if (bytes.size() != shape.size() * 4)
    throw ProtocolError("payload size does not match shape");
  std::vector<double> values;
  try {
    values = decode_f32le(bytes);
  } catch (const Error &e) {
    throw ProtocolError(e.what());
  }
  return ClassifyRequest{msg["id"].get<std::uint64_t>(), ImageTensor(shape, std::move(values))};
}

nlohmann::json label_reply(std::uint64_t id, std::uint32_t label) {
  return {{"op", "label"}, {"id", id}, {"label", label}};
}

nlohmann::json error_reply(std::uint64_t id, const std::string &message) {
  return {{"op", "error"}, {"id", id}, {"message", message}};
}

nlohmann::json parse_line(std::string_view line) {
  nlohmann::json msg = nlohmann::json::parse(line, nullptr, false);
  if (msg.is_discarded() || !msg.is_object())
    throw ProtocolError("malformed JSON line");
  return msg;
}

} // namespace trirl::wire
