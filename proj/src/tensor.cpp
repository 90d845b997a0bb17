#include "trirl/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trirl/error.hpp"

namespace trirl {

namespace {

std::string shape_str(const Shape &s) {
  return std::to_string(s.width) + "x" + std::to_string(s.height) + "x" +
         std::to_string(s.channels);
}

} // namespace

ImageTensor::ImageTensor(Shape shape, double fill)
    : shape_(shape), data_(shape.size(), fill) {
  if (shape.width == 0 || shape.height == 0 || shape.channels == 0)
    throw ConfigError("image dimensions must be positive, got " + shape_str(shape));
}

ImageTensor::ImageTensor(Shape shape, std::vector<double> data)
    : shape_(shape), data_(std::move(data)) {
  if (shape.width == 0 || shape.height == 0 || shape.channels == 0)
    throw ConfigError("image dimensions must be positive, got " + shape_str(shape));
  if (data_.size() != shape.size())
    throw ShapeMismatch("data length " + std::to_string(data_.size()) +
                        " does not match shape " + shape_str(shape));
}

void require_same_shape(const ImageTensor &a, const ImageTensor &b) {
  if (a.shape() != b.shape())
    throw ShapeMismatch("shape mismatch: " + shape_str(a.shape()) + " vs " +
                        shape_str(b.shape()));
}

double l2_distance(const ImageTensor &a, const ImageTensor &b) {
  require_same_shape(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double l2_norm(const ImageTensor &a) {
  double sum = 0.0;
  for (double v : a.data())
    sum += v * v;
  return std::sqrt(sum);
}

double dot(const ImageTensor &a, const ImageTensor &b) {
  require_same_shape(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += a[i] * b[i];
  return sum;
}

double rmse(const ImageTensor &a, const ImageTensor &b) {
  const double d = l2_distance(a, b);
  return d / std::sqrt(static_cast<double>(a.size()));
}

ImageTensor clip_unit(const ImageTensor &img) {
  ImageTensor out = img;
  for (double &v : out.data())
    v = std::clamp(v, 0.0, 1.0);
  return out;
}

ImageTensor round_to_f32(const ImageTensor &img) {
  ImageTensor out = img;
  for (double &v : out.data())
    v = static_cast<double>(static_cast<float>(v));
  return out;
}

ImageTensor from_u8(Shape shape, std::span<const std::uint8_t> pixels) {
  std::vector<double> data(pixels.size());
  std::transform(pixels.begin(), pixels.end(), data.begin(),
                 [](std::uint8_t p) { return p / 255.0; });
  return ImageTensor(shape, std::move(data));
}

ImageTensor operator-(const ImageTensor &a, const ImageTensor &b) {
  require_same_shape(a, b);
  ImageTensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] -= b[i];
  return out;
}

ImageTensor operator+(const ImageTensor &a, const ImageTensor &b) {
  require_same_shape(a, b);
  ImageTensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += b[i];
  return out;
}

ImageTensor operator*(double s, const ImageTensor &a) {
  ImageTensor out = a;
  for (double &v : out.data())
    v *= s;
  return out;
}

} // namespace trirl
