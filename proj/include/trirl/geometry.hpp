#ifndef TRIRL_GEOMETRY_HPP
#define TRIRL_GEOMETRY_HPP

#include "trirl/frequency.hpp"
#include "trirl/tensor.hpp"

namespace trirl {

/// Angles of one candidate triangle (x, x_adv, candidate).
///
/// alpha sits at the benign vertex x, |beta| at the candidate vertex, and the
/// remaining pi - alpha - |beta| at x_adv. The sign of beta picks the side of
/// the d1 axis. By the law of sines the candidate lies at distance
///
///   delta_new = delta_t * sin(alpha + |beta|) / sin(|beta|)
///
/// from x, which shrinks strictly as |beta| grows.
struct TriangleParams {
  double alpha = 0.0;
  double beta = 0.0;
  double beta_lower = 0.0;
  double beta_upper = 0.0;
};

/// Smallest admissible slack to pi for alpha + |beta|; below it a candidate
/// is rejected before any query is made.
inline constexpr double kDegenerateSlack = 1e-6;

bool is_degenerate(double alpha, double beta);

/// delta_new for a triangle with base length delta_t (no clipping involved).
double candidate_distance(double delta_t, double alpha, double beta);

/// Candidate before clipping: x + delta_new * (cos a * d1 + sign(beta) * sin a * d2).
ImageTensor candidate_unclipped(const ImageTensor &x, const ImageTensor &x_adv,
                                const TriangleParams &params,
                                const FrequencySubspace &subspace);

/// candidate_unclipped followed by clip_unit.
ImageTensor candidate(const ImageTensor &x, const ImageTensor &x_adv,
                      const TriangleParams &params, const FrequencySubspace &subspace);

/// max(pi - 2 alpha, beta_lower)
double initial_beta(double alpha, double beta_lower);

/// min(pi / 2, pi - alpha)
double beta_upper_bound(double alpha);

} // namespace trirl

#endif // TRIRL_GEOMETRY_HPP
