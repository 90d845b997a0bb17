#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "trirl/error.hpp"

using namespace trirl;
using trirl::testing::random_image;

namespace {

double max_abs_diff(const ImageTensor &a, const ImageTensor &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace

TEST_CASE("constant image has a DC-only spectrum") {
  const ImageTensor img({5, 4, 2}, 0.37);
  const ImageTensor coef = dct2(img);
  for (std::uint32_t ch = 0; ch < 2; ++ch)
    for (std::uint32_t y = 0; y < 4; ++y)
      for (std::uint32_t x = 0; x < 5; ++x) {
        if (x == 0 && y == 0)
          CHECK(coef.at(x, y, ch) == doctest::Approx(0.37 * std::sqrt(20.0)));
        else
          CHECK(std::abs(coef.at(x, y, ch)) < 1e-12);
      }
}

TEST_CASE("dct2 round trip and Parseval") {
  Rng rng(3);
  const ImageTensor img = random_image({8, 8, 3}, rng);
  const ImageTensor coef = dct2(img);
  CHECK(max_abs_diff(idct2(coef), img) < 1e-6);
  CHECK(std::abs(l2_norm(coef) - l2_norm(img)) <= 1e-9 * l2_norm(img));
}

TEST_CASE("low-frequency extent") {
  CHECK(low_frequency_extent(224, 0.1) == 23);
  CHECK(low_frequency_extent(4, 0.1) == 1);
  CHECK(low_frequency_extent(4, 0.5) == 2);
  CHECK(low_frequency_extent(10, 0.3) == 3);
  CHECK(low_frequency_extent(2, 1.0) == 2);
}

TEST_CASE("spectrum mask has no energy outside the block") {
  Rng rng(8);
  const Shape s{9, 6, 3};
  const ImageTensor spec = low_frequency_spectrum(s, 0.3, rng);
  for (std::uint32_t ch = 0; ch < 3; ++ch)
    for (std::uint32_t y = 0; y < 6; ++y)
      for (std::uint32_t x = 0; x < 9; ++x)
        if (x >= 3 || y >= 2)
          CHECK(spec.at(x, y, ch) == 0.0);
  // spatial direction projects back onto the same block
  const ImageTensor back = dct2(idct2(spec));
  for (std::uint32_t ch = 0; ch < 3; ++ch)
    for (std::uint32_t y = 2; y < 6; ++y)
      for (std::uint32_t x = 3; x < 9; ++x)
        CHECK(std::abs(back.at(x, y, ch)) < 1e-12);
}

TEST_CASE("sampled subspaces are orthonormal") {
  Rng data(4), rng(5);
  for (int i = 0; i < 100; ++i) {
    const Shape s{8, 8, 3};
    const ImageTensor x = random_image(s, data), x_adv = random_image(s, data);
    const FrequencySubspace sub = sample_subspace(x, x_adv, 0.25, rng);
    CHECK(std::abs(l2_norm(sub.d1) - 1.0) <= 1e-9);
    CHECK(std::abs(l2_norm(sub.d2) - 1.0) <= 1e-9);
    CHECK(std::abs(dot(sub.d1, sub.d2)) <= 1e-9);
    CHECK(max_abs_diff(sub.d1, (1.0 / l2_distance(x, x_adv)) * (x_adv - x)) < 1e-12);
    const double a = 2 * data.uniform() - 1, b = 2 * data.uniform() - 1;
    const ImageTensor p = x + a * sub.d1 + b * sub.d2;
    CHECK(std::abs(l2_distance(p, x) - std::hypot(a, b)) <= 1e-9);
  }
}

TEST_CASE("full ratio on 2x2x1 reaches every direction orthogonal to d1") {
  const ImageTensor x({2, 2, 1}, 0.5);
  ImageTensor x_adv = x;
  x_adv[0] += 0.3;
  Rng rng(6);
  // accumulate the span of sampled d2: the scatter matrix must have rank 3
  double m[4][4] = {};
  for (int i = 0; i < 200; ++i) {
    const FrequencySubspace sub = sample_subspace(x, x_adv, 1.0, rng);
    CHECK(std::abs(sub.d2[0]) < 1e-9);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        m[r][c] += sub.d2[r] * sub.d2[c];
  }
  // the 3x3 block over coordinates 1..3 is positive definite
  const double a = m[1][1], b = m[1][2], c = m[1][3], d = m[2][2], e = m[2][3], f = m[3][3];
  const double det = a * (d * f - e * e) - b * (b * f - c * e) + c * (b * e - c * d);
  CHECK(a > 1.0);
  CHECK(a * d - b * b > 1.0);
  CHECK(det > 1.0);
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  Rng data(1);
  const ImageTensor x = random_image({6, 6, 1}, data), x_adv = random_image({6, 6, 1}, data);
  Rng a(99), b(99);
  CHECK(sample_subspace(x, x_adv, 0.5, a).d2 == sample_subspace(x, x_adv, 0.5, b).d2);
}

TEST_CASE("degenerate and invalid inputs") {
  Rng rng(2);
  const ImageTensor x({4, 4, 1}, 0.5);
  CHECK_THROWS_AS(sample_subspace(x, x, 0.5, rng), DegenerateDirection);
  ImageTensor y = x;
  y[3] = 0.9;
  CHECK_THROWS(sample_subspace(x, y, 0.0, rng));
  CHECK_THROWS(sample_subspace(x, y, 1.5, rng));
}
