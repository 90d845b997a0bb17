#ifndef TRIRL_TA_FAILURE_HPP
#define TRIRL_TA_FAILURE_HPP

#include <string>
#include <vector>

#include "trirl/synthetic_oracles.hpp"

namespace trirl {

/// Non-convex two-class region built around a fixed benign point x and a
/// fixed axis d1 (the direction of the starting adversary). With r = |p - x|
/// and theta the angle between p - x and d1, p is adversarial iff
///
///   theta <= axis_cone  and r >= axis_min_ratio  * base_distance, or
///   wedge_lo <= theta <= wedge_hi and r >= wedge_min_ratio * base_distance.
///
/// The region is rotationally symmetric about d1, so every plane through
/// x and the starting adversary shows the same 2-D picture. Learned angles at
/// or below wedge_lo never reach an adversarial point off the axis; only
/// larger angles do.
struct TaFailureParams {
  std::string id;
  Shape shape;
  std::uint64_t seed = 0;
  double base_distance = 0.25;
  double axis_cone = 0.05;
  double axis_min_ratio = 0.5;
  double wedge_lo = 0.0;
  double wedge_hi = 0.0;
  double wedge_min_ratio = 0.3;
};

class TaFailureOracle : public SyntheticOracle {
public:
  TaFailureOracle(TaFailureParams params, ImageTensor x, ImageTensor axis);

  Label predict(const ImageTensor &img) override;
  Shape input_shape() const override { return x_.shape(); }
  std::string describe() const override { return "ta-failure:" + params_.id; }
  double optimal_distance(const ImageTensor &x) const override;

  /// Membership test in polar coordinates about (x, d1).
  bool adversarial_at(double r, double theta) const;

  const TaFailureParams &params() const { return params_; }
  const ImageTensor &benign() const { return x_; }
  const ImageTensor &axis() const { return axis_; }

private:
  TaFailureParams params_;
  ImageTensor x_;
  ImageTensor axis_;
};

/// A committed fixture: parameters, the derived benign image and starting
/// adversary, and the outcomes the two controllers are expected to reach.
struct TaFailureFixture {
  TaFailureParams params;
  ImageTensor x;
  ImageTensor start;
  Label label;
  bool ta_expected_to_improve = false;
  bool tarl_expected_to_improve = true;

  TaFailureOracle oracle() const;
};

const std::vector<TaFailureParams> &ta_failure_catalog();
TaFailureFixture make_ta_failure_fixture(const std::string &id);

struct RegionAudit {
  std::size_t samples = 0;
  std::size_t adversarial = 0;
  /// Adversarial samples at angles above `reach_limit` (beyond the TA path).
  std::size_t beyond_reach = 0;
};

/// Brute-force sampling of a side x side polar grid (theta in [0, pi],
/// r in (0, 2 * base_distance]) in one plane through x and the axis.
RegionAudit audit_region(const TaFailureFixture &fixture, double reach_limit,
                         std::size_t side = 100);

} // namespace trirl

#endif // TRIRL_TA_FAILURE_HPP
