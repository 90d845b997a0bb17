#include "trirl/ta_failure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trirl/error.hpp"
#include "trirl/rng.hpp"

namespace trirl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStep = kPi / 64.0; // default alpha grid step

ImageTensor random_unit(Shape shape, Rng &rng) {
  ImageTensor v(shape);
  for (double &e : v.data())
    e = rng.normal();
  return (1.0 / l2_norm(v)) * v;
}

} // namespace

TaFailureOracle::TaFailureOracle(TaFailureParams params, ImageTensor x, ImageTensor axis)
    : params_(std::move(params)), x_(std::move(x)), axis_(std::move(axis)) {
  require_same_shape(x_, axis_);
  if (std::abs(l2_norm(axis_) - 1.0) > 1e-9)
    throw ConfigError("ta-failure axis must be a unit vector");
  if (!(params_.base_distance > 0.0) || !(params_.wedge_lo < params_.wedge_hi))
    throw ConfigError("ta-failure parameters describe an empty region");
}

bool TaFailureOracle::adversarial_at(double r, double theta) const {
  const double d = params_.base_distance;
  if (theta <= params_.axis_cone && r >= params_.axis_min_ratio * d)
    return true;
  return theta >= params_.wedge_lo && theta <= params_.wedge_hi &&
         r >= params_.wedge_min_ratio * d;
}

Label TaFailureOracle::predict(const ImageTensor &img) {
  check_input_shape(*this, img);
  const ImageTensor v = img - x_;
  const double r = l2_norm(v);
  if (r == 0.0)
    return Label{0};
  const double c = std::clamp(dot(v, axis_) / r, -1.0, 1.0);
  return Label{adversarial_at(r, std::acos(c)) ? 1u : 0u};
}

double TaFailureOracle::optimal_distance(const ImageTensor &x) const {
  if (!(x == x_))
    throw PreconditionError("ta-failure optimum is only defined at the fixture's benign point");
  return params_.base_distance * std::min(params_.axis_min_ratio, params_.wedge_min_ratio);
}

TaFailureOracle TaFailureFixture::oracle() const {
  const ImageTensor axis = (1.0 / l2_distance(start, x)) * (start - x);
  return TaFailureOracle(params, x, axis);
}

const std::vector<TaFailureParams> &ta_failure_catalog() {
  // Wedges start between grid points, 2.5 to 5.5 steps above the default
  // starting angle pi/4, and the TA path only ever moves down from pi/4.
  static const std::vector<TaFailureParams> catalog = {
      {"f1", {4, 4, 1}, 101, 0.25, 0.05, 0.5, kPi / 4 + 2.5 * kStep, kPi / 2 + 0.2, 0.3},
      {"f2", {8, 8, 1}, 202, 0.30, 0.04, 0.6, kPi / 4 + 3.5 * kStep, kPi / 2 + 0.1, 0.3},
      {"f3", {4, 4, 3}, 303, 0.25, 0.05, 0.5, kPi / 4 + 4.5 * kStep, kPi / 2 + 0.3, 0.2},
      {"f4", {6, 6, 1}, 404, 0.20, 0.03, 0.4, kPi / 4 + 2.5 * kStep, kPi / 4 + 8.5 * kStep, 0.4},
      {"f5", {8, 8, 3}, 505, 0.35, 0.05, 0.5, kPi / 4 + 5.5 * kStep, kPi / 2 + 0.2, 0.3},
  };
  return catalog;
}

TaFailureFixture make_ta_failure_fixture(const std::string &id) {
  const auto &catalog = ta_failure_catalog();
  const auto it = std::find_if(catalog.begin(), catalog.end(),
                               [&](const TaFailureParams &p) { return p.id == id; });
  if (it == catalog.end())
    throw ConfigError("unknown ta-failure fixture '" + id + "'");

  Rng rng(it->seed);
  ImageTensor x(it->shape);
  for (double &v : x.data())
    v = 0.35 + 0.3 * rng.uniform();
  x = round_to_f32(x);
  const ImageTensor axis = random_unit(it->shape, rng);
  ImageTensor start = round_to_f32(x + it->base_distance * axis);
  return TaFailureFixture{*it, std::move(x), std::move(start), Label{0}, false, true};
}

RegionAudit audit_region(const TaFailureFixture &fixture, double reach_limit, std::size_t side) {
  TaFailureOracle oracle = fixture.oracle();
  Rng rng(fixture.params.seed ^ 0xa0d17ULL);
  ImageTensor ortho = random_unit(fixture.x.shape(), rng);
  const double proj = dot(ortho, oracle.axis());
  for (std::size_t i = 0; i < ortho.size(); ++i)
    ortho[i] -= proj * oracle.axis()[i];
  ortho = (1.0 / l2_norm(ortho)) * ortho;

  RegionAudit audit;
  const double r_max = 2.0 * fixture.params.base_distance;
  for (std::size_t i = 0; i < side; ++i) {
    const double theta = kPi * static_cast<double>(i) / static_cast<double>(side - 1);
    for (std::size_t j = 1; j <= side; ++j) {
      const double r = r_max * static_cast<double>(j) / static_cast<double>(side);
      ImageTensor p = fixture.x;
      for (std::size_t k = 0; k < p.size(); ++k)
        p[k] += r * (std::cos(theta) * oracle.axis()[k] + std::sin(theta) * ortho[k]);
      ++audit.samples;
      if (oracle.predict(p).class_index != fixture.label.class_index) {
        ++audit.adversarial;
        if (theta > reach_limit)
          ++audit.beyond_reach;
      }
    }
  }
  return audit;
}

} // namespace trirl
