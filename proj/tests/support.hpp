#ifndef TRIRL_TESTS_SUPPORT_HPP
#define TRIRL_TESTS_SUPPORT_HPP

#include <cmath>

#include "trirl/frequency.hpp"
#include "trirl/rng.hpp"
#include "trirl/synthetic_oracles.hpp"
#include "trirl/tensor.hpp"

namespace trirl::testing {

inline ImageTensor random_image(Shape shape, Rng &rng, double lo = 0.0, double hi = 1.0) {
  ImageTensor img(shape);
  for (double &v : img.data())
    v = lo + (hi - lo) * rng.uniform();
  return img;
}

inline ImageTensor random_unit(Shape shape, Rng &rng) {
  ImageTensor v(shape);
  for (double &e : v.data())
    e = rng.normal();
  return (1.0 / l2_norm(v)) * v;
}

// Benign image in the middle of the box and a plane `distance` away from it
// whose normal lies in the lowest-frequency DCT block of side ratio `w_ratio`.
struct HalfspaceCase {
  ImageTensor x;
  HalfspaceOracle oracle;
  double distance;
};

inline HalfspaceCase random_halfspace(Shape shape, Rng &rng, double w_ratio, double dmin,
                                      double dmax) {
  const ImageTensor x = round_to_f32(random_image(shape, rng, 0.3, 0.7));
  ImageTensor w = idct2(low_frequency_spectrum(shape, w_ratio, rng));
  w = (1.0 / l2_norm(w)) * w;
  const double d = dmin + (dmax - dmin) * rng.uniform();
  return {x, HalfspaceOracle(w, -dot(w, x) - d), d};
}

struct SphereCase {
  ImageTensor x;
  SphereOracle oracle;
};

// x sits strictly inside the ball, off-centre.
inline SphereCase random_sphere(Shape shape, Rng &rng) {
  const ImageTensor x = round_to_f32(random_image(shape, rng, 0.3, 0.7));
  const ImageTensor u = random_unit(shape, rng);
  const double radius = 0.2 + 0.2 * rng.uniform();
  return {x, SphereOracle(x + 0.05 * u, radius)};
}

} // namespace trirl::testing

#endif
