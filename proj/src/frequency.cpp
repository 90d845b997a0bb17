#include "trirl/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <numbers>
#include <vector>

#include "trirl/error.hpp"

namespace trirl {

namespace {

constexpr int kMaxResamples = 16;

// Row k of the orthonormal DCT-II matrix: c_k * cos(pi * (2n + 1) * k / (2N)).
std::vector<double> dct_matrix(std::uint32_t n) {
  std::vector<double> m(std::size_t{n} * n);
  for (std::uint32_t k = 0; k < n; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (std::uint32_t i = 0; i < n; ++i)
      m[std::size_t{k} * n + i] =
          scale * std::cos(std::numbers::pi * (2.0 * i + 1.0) * k / (2.0 * n));
  }
  return m;
}

// Applies out = M * in (inverse=false) or M^T * in (inverse=true) along
// the x axis, then along the y axis, for every channel.
ImageTensor separable(const ImageTensor &in, bool inverse) {
  const std::uint32_t w = in.width(), h = in.height(), c = in.channels();
  const auto mx = dct_matrix(w);
  const auto my = dct_matrix(h);
  auto coeff = [inverse](const std::vector<double> &m, std::uint32_t n, std::uint32_t row,
                         std::uint32_t col) {
    return inverse ? m[std::size_t{col} * n + row] : m[std::size_t{row} * n + col];
  };

  ImageTensor tmp(in.shape());
  for (std::uint32_t y = 0; y < h; ++y)
    for (std::uint32_t ch = 0; ch < c; ++ch)
      for (std::uint32_t u = 0; u < w; ++u) {
        double acc = 0.0;
        for (std::uint32_t x = 0; x < w; ++x)
          acc += coeff(mx, w, u, x) * in.at(x, y, ch);
        tmp.at(u, y, ch) = acc;
      }

  ImageTensor out(in.shape());
  for (std::uint32_t u = 0; u < w; ++u)
    for (std::uint32_t ch = 0; ch < c; ++ch)
      for (std::uint32_t v = 0; v < h; ++v) {
        double acc = 0.0;
        for (std::uint32_t y = 0; y < h; ++y)
          acc += coeff(my, h, v, y) * tmp.at(u, y, ch);
        out.at(u, v, ch) = acc;
      }
  return out;
}

} // namespace

ImageTensor dct2(const ImageTensor &img) { return separable(img, false); }

ImageTensor idct2(const ImageTensor &coef) { return separable(coef, true); }

std::uint32_t low_frequency_extent(std::uint32_t n, double freq_ratio) {
  if (!(freq_ratio > 0.0 && freq_ratio <= 1.0))
    throw ConfigError("freq_ratio must lie in (0, 1]");
  const auto k = static_cast<std::uint32_t>(std::ceil(freq_ratio * n - 1e-12));
  return std::clamp<std::uint32_t>(k, 1, n);
}

ImageTensor low_frequency_spectrum(Shape shape, double freq_ratio, Rng &rng) {
  const std::uint32_t kw = low_frequency_extent(shape.width, freq_ratio);
  const std::uint32_t kh = low_frequency_extent(shape.height, freq_ratio);
  ImageTensor spectrum(shape);
  for (std::uint32_t v = 0; v < kh; ++v)
    for (std::uint32_t u = 0; u < kw; ++u)
      for (std::uint32_t ch = 0; ch < shape.channels; ++ch)
        spectrum.at(u, v, ch) = rng.normal();
  return spectrum;
}

FrequencySubspace sample_subspace(const ImageTensor &x, const ImageTensor &x_adv,
                                  double freq_ratio, Rng &rng) {
  require_same_shape(x, x_adv);
  const ImageTensor diff = x_adv - x;
  const double dist = l2_norm(diff);
  if (dist == 0.0)
    throw DegenerateDirection("x and x_adv coincide; no direction to build a subspace on");
  ImageTensor d1 = (1.0 / dist) * diff;

  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    ImageTensor d2 = idct2(low_frequency_spectrum(x.shape(), freq_ratio, rng));
    // Two Gram-Schmidt passes keep |<d1, d2>| at rounding level.
    for (int pass = 0; pass < 2; ++pass) {
      const double proj = dot(d2, d1);
      for (std::size_t i = 0; i < d2.size(); ++i)
        d2[i] -= proj * d1[i];
    }
    const double norm = l2_norm(d2);
    if (norm < 1e-12)
      continue;
    d2 = (1.0 / norm) * d2;
    return FrequencySubspace{std::move(d1), std::move(d2), freq_ratio};
  }
  throw DegenerateDirection("low-frequency sample is parallel to x_adv - x after " +
                            std::to_string(kMaxResamples) + " draws");
}

} // namespace trirl
