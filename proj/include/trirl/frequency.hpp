#ifndef TRIRL_FREQUENCY_HPP
#define TRIRL_FREQUENCY_HPP

#include "trirl/rng.hpp"
#include "trirl/tensor.hpp"

namespace trirl {

/// Orthonormal type-II 2-D DCT applied independently to each channel.
/// Coefficient (u, v) is stored at pixel position (x = u, y = v).
ImageTensor dct2(const ImageTensor &img);
/// Inverse of dct2 (orthonormal type-III).
ImageTensor idct2(const ImageTensor &coef);

/// Spatial-domain plane through x: d1 points at the current adversary,
/// d2 is a low-frequency direction orthogonal to d1. Both unit length.
struct FrequencySubspace {
  ImageTensor d1;
  ImageTensor d2;
  double freq_ratio = 0.1;
};

/// Number of low-frequency rows/columns kept for a given ratio: ceil(ratio * n).
std::uint32_t low_frequency_extent(std::uint32_t n, double freq_ratio);

/// i.i.d. standard normal values in the top-left low-frequency block of each
/// channel's spectrum, zero elsewhere.
ImageTensor low_frequency_spectrum(Shape shape, double freq_ratio, Rng &rng);

FrequencySubspace sample_subspace(const ImageTensor &x, const ImageTensor &x_adv,
                                  double freq_ratio, Rng &rng);

} // namespace trirl

#endif // TRIRL_FREQUENCY_HPP
