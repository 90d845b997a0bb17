#include "trirl/tnsr_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace trirl {

namespace {

constexpr std::uint8_t kMagic[4] = {'T', 'N', 'S', 'R'};
constexpr std::size_t kHeaderSize = 4 + 1 + 3 * 4;

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t *p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
         std::uint32_t{p[3]} << 24;
}

} // namespace

std::vector<std::uint8_t> encode_f32le(std::span<const double> values) {
  std::vector<std::uint8_t> out;
  out.reserve(values.size() * 4);
  for (double v : values) {
    const float f = static_cast<float>(v);
    if (!std::isfinite(f))
      throw FormatError(FormatError::Kind::NonFinite, "cannot encode a non-finite value");
    put_u32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

std::vector<double> decode_f32le(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 4 != 0)
    throw FormatError(FormatError::Kind::Truncated,
                      "f32 payload length " + std::to_string(bytes.size()) +
                          " is not a multiple of 4");
  std::vector<double> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const float f = std::bit_cast<float>(get_u32(bytes.data() + 4 * i));
    if (!std::isfinite(f))
      throw FormatError(FormatError::Kind::NonFinite,
                        "non-finite value at index " + std::to_string(i));
    out[i] = f;
  }
  return out;
}

std::vector<std::uint8_t> encode_tensor(const ImageTensor &img) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(kTnsrVersion);
  put_u32(out, img.width());
  put_u32(out, img.height());
  put_u32(out, img.channels());
  const auto payload = encode_f32le(img.data());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

ImageTensor decode_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FormatError(FormatError::Kind::BadMagic, "missing TNSR magic");
  if (bytes.size() < kHeaderSize)
    throw FormatError(FormatError::Kind::Truncated, "truncated TNSR header");
  if (bytes[4] != kTnsrVersion)
    throw FormatError(FormatError::Kind::BadVersion,
                      "unsupported TNSR version " + std::to_string(bytes[4]));
  const Shape shape{get_u32(bytes.data() + 5), get_u32(bytes.data() + 9),
                    get_u32(bytes.data() + 13)};
  if (shape.width == 0 || shape.height == 0 || shape.channels == 0)
    throw FormatError(FormatError::Kind::Truncated, "TNSR header declares an empty tensor");
  const std::size_t want = shape.size() * 4;
  const std::size_t have = bytes.size() - kHeaderSize;
  if (have < want)
    throw FormatError(FormatError::Kind::Truncated,
                      "TNSR payload has " + std::to_string(have / 4) + " floats, header declares " +
                          std::to_string(shape.size()));
  if (have > want)
    throw FormatError(FormatError::Kind::TrailingBytes, "TNSR payload has trailing bytes");
  return ImageTensor(shape, decode_f32le(bytes.subspan(kHeaderSize)));
}

ImageTensor read_tensor(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw FormatError(FormatError::Kind::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_tensor(bytes);
}

void write_tensor(const std::filesystem::path &path, const ImageTensor &img) {
  const auto bytes = encode_tensor(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw FormatError(FormatError::Kind::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw FormatError(FormatError::Kind::Io, "short write to " + path.string());
}

} // namespace trirl
