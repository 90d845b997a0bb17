#ifndef TRIRL_TENSOR_HPP
#define TRIRL_TENSOR_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace trirl {

struct Shape {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t channels = 0;

  std::size_t size() const {
    return std::size_t{width} * height * channels;
  }
  friend bool operator==(const Shape &, const Shape &) = default;
};

/// A w x h x c image, row-major and channel-last:
/// element (x, y, ch) lives at ((y * width) + x) * channels + ch.
/// Values are reals; valid images lie in [0, 1].
class ImageTensor {
public:
  ImageTensor() = default;
  explicit ImageTensor(Shape shape, double fill = 0.0);
  ImageTensor(Shape shape, std::vector<double> data);

  const Shape &shape() const { return shape_; }
  std::uint32_t width() const { return shape_.width; }
  std::uint32_t height() const { return shape_.height; }
  std::uint32_t channels() const { return shape_.channels; }
  std::size_t size() const { return data_.size(); }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double &operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double &at(std::uint32_t x, std::uint32_t y, std::uint32_t ch) {
    return data_[index(x, y, ch)];
  }
  double at(std::uint32_t x, std::uint32_t y, std::uint32_t ch) const {
    return data_[index(x, y, ch)];
  }

  friend bool operator==(const ImageTensor &, const ImageTensor &) = default;

private:
  std::size_t index(std::uint32_t x, std::uint32_t y, std::uint32_t ch) const {
    return (std::size_t{y} * shape_.width + x) * shape_.channels + ch;
  }

  Shape shape_;
  std::vector<double> data_;
};

struct Label {
  std::uint32_t class_index = 0;
  friend bool operator==(const Label &, const Label &) = default;
};

struct Seed {
  std::uint64_t value = 0;
};

void require_same_shape(const ImageTensor &a, const ImageTensor &b);

double l2_distance(const ImageTensor &a, const ImageTensor &b);
double l2_norm(const ImageTensor &a);
double dot(const ImageTensor &a, const ImageTensor &b);

/// Root-mean-square per-component deviation.
double rmse(const ImageTensor &a, const ImageTensor &b);

ImageTensor clip_unit(const ImageTensor &img);

/// Rounds every component to the nearest float32. Queried images are kept on
/// this grid so TNSR files and wire payloads reproduce them exactly.
ImageTensor round_to_f32(const ImageTensor &img);

/// Converts 8-bit pixel values to the [0, 1] domain.
ImageTensor from_u8(Shape shape, std::span<const std::uint8_t> pixels);

// Elementwise helpers used by the geometry and subspace code.
ImageTensor operator-(const ImageTensor &a, const ImageTensor &b);
ImageTensor operator+(const ImageTensor &a, const ImageTensor &b);
ImageTensor operator*(double s, const ImageTensor &a);

} // namespace trirl

#endif // TRIRL_TENSOR_HPP
