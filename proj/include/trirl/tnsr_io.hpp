#ifndef TRIRL_TNSR_IO_HPP
#define TRIRL_TNSR_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "trirl/error.hpp"
#include "trirl/tensor.hpp"

namespace trirl {

// TNSR layout: "TNSR", u8 version (1), u32le width, u32le height,
// u32le channels, then width*height*channels f32le values. No padding.

class FormatError : public Error {
public:
  enum class Kind { BadMagic, BadVersion, Truncated, TrailingBytes, NonFinite, Io };

  FormatError(Kind kind, const std::string &what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

inline constexpr std::uint8_t kTnsrVersion = 1;

std::vector<std::uint8_t> encode_tensor(const ImageTensor &img);
ImageTensor decode_tensor(std::span<const std::uint8_t> bytes);

ImageTensor read_tensor(const std::filesystem::path &path);
void write_tensor(const std::filesystem::path &path, const ImageTensor &img);

// Little-endian float32 payload helpers, shared with the wire protocol.
std::vector<std::uint8_t> encode_f32le(std::span<const double> values);
std::vector<double> decode_f32le(std::span<const std::uint8_t> bytes);

} // namespace trirl

#endif // TRIRL_TNSR_IO_HPP
