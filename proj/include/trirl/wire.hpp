#ifndef TRIRL_WIRE_HPP
#define TRIRL_WIRE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "trirl/tensor.hpp"

// Newline-delimited JSON protocol spoken between the engine and a model bridge.
//
//   -> {"op":"hello","version":1}
//   <- {"op":"hello","version":1,"classes":N,"shape":[w,h,c]}
//   -> {"op":"classify","id":K,"dtype":"f32le","shape":[w,h,c],"data":"<base64>"}
//   <- {"op":"label","id":K,"label":L}  |  {"op":"error","id":K,"message":"..."}

namespace trirl::wire {

inline constexpr int kVersion = 1;

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws ProtocolError on characters outside the alphabet or bad padding.
std::vector<std::uint8_t> base64_decode(std::string_view text);

nlohmann::json hello_request();

struct Hello {
  std::uint32_t classes = 0;
  Shape shape;
};
nlohmann::json hello_reply(const Hello &hello);
Hello parse_hello_reply(const nlohmann::json &msg);

nlohmann::json classify_request(std::uint64_t id, const ImageTensor &img);

struct ClassifyRequest {
  std::uint64_t id = 0;
  ImageTensor image;
};
ClassifyRequest parse_classify_request(const nlohmann::json &msg);

nlohmann::json label_reply(std::uint64_t id, std::uint32_t label);
nlohmann::json error_reply(std::uint64_t id, const std::string &message);

/// Parses one line; ProtocolError on malformed JSON or a non-object.
nlohmann::json parse_line(std::string_view line);

} // namespace trirl::wire

#endif // TRIRL_WIRE_HPP
