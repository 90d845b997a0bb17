#include "trirl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trirl/error.hpp"

namespace trirl {

namespace {

void check_angles(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi))
    throw PreconditionError("alpha must lie in (0, pi)");
  if (!(std::abs(beta) > 0.0 && std::abs(beta) < std::numbers::pi))
    throw PreconditionError("|beta| must lie in (0, pi)");
}

} // namespace

bool is_degenerate(double alpha, double beta) {
  return alpha + std::abs(beta) >= std::numbers::pi - kDegenerateSlack;
}

double candidate_distance(double delta_t, double alpha, double beta) {
  check_angles(alpha, beta);
  const double b = std::abs(beta);
  const double denom = std::sin(b);
  if (std::sin(alpha + b) < 1e-12 || denom < 1e-12)
    throw DegenerateTriangle("alpha + |beta| is too close to pi");
  return delta_t * std::sin(alpha + b) / denom;
}

ImageTensor candidate_unclipped(const ImageTensor &x, const ImageTensor &x_adv,
                                const TriangleParams &params,
                                const FrequencySubspace &subspace) {
  require_same_shape(x, x_adv);
  require_same_shape(x, subspace.d1);
  const double delta_new = candidate_distance(l2_distance(x, x_adv), params.alpha, params.beta);
  const double along = delta_new * std::cos(params.alpha);
  const double across = delta_new * std::sin(params.alpha) * (params.beta < 0.0 ? -1.0 : 1.0);
  ImageTensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += along * subspace.d1[i] + across * subspace.d2[i];
  return out;
}

ImageTensor candidate(const ImageTensor &x, const ImageTensor &x_adv,
                      const TriangleParams &params, const FrequencySubspace &subspace) {
  return clip_unit(candidate_unclipped(x, x_adv, params, subspace));
}

double initial_beta(double alpha, double beta_lower) {
  return std::max(std::numbers::pi - 2.0 * alpha, beta_lower);
}

double beta_upper_bound(double alpha) {
  return std::min(std::numbers::pi / 2.0, std::numbers::pi - alpha);
}

} // namespace trirl
