#include "trirl/synthetic_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trirl/error.hpp"

namespace trirl {

namespace {

void require_finite(const ImageTensor &t, const char *what) {
  for (double v : t.data())
    if (!std::isfinite(v))
      throw ConfigError(std::string(what) + " has non-finite entries");
}

} // namespace

HalfspaceOracle::HalfspaceOracle(ImageTensor normal, double offset)
    : normal_(std::move(normal)), offset_(offset), norm_(l2_norm(normal_)) {
  require_finite(normal_, "halfspace normal");
  if (!std::isfinite(offset_))
    throw ConfigError("halfspace offset must be finite");
  if (!(norm_ > 0.0))
    throw ConfigError("halfspace normal must be non-zero");
}

double HalfspaceOracle::signed_margin(const ImageTensor &img) const {
  return dot(normal_, img) + offset_;
}

Label HalfspaceOracle::predict(const ImageTensor &img) {
  check_input_shape(*this, img);
  return Label{signed_margin(img) > 0.0 ? 1u : 0u};
}

double HalfspaceOracle::optimal_distance(const ImageTensor &x) const {
  return std::abs(signed_margin(x)) / norm_;
}

SphereOracle::SphereOracle(ImageTensor center, double radius)
    : center_(std::move(center)), radius_(radius) {
  require_finite(center_, "sphere center");
  if (!(radius_ > 0.0) || !std::isfinite(radius_))
    throw ConfigError("sphere radius must be positive and finite");
}

Label SphereOracle::predict(const ImageTensor &img) {
  check_input_shape(*this, img);
  return Label{l2_distance(img, center_) < radius_ ? 0u : 1u};
}

double SphereOracle::optimal_distance(const ImageTensor &x) const {
  return std::abs(radius_ - l2_distance(x, center_));
}

PolytopeOracle::PolytopeOracle(std::vector<Face> faces) : faces_(std::move(faces)) {
  if (faces_.empty())
    throw ConfigError("polytope needs at least one face");
  for (const auto &f : faces_) {
    require_same_shape(f.normal, faces_.front().normal);
    require_finite(f.normal, "polytope face normal");
    if (!std::isfinite(f.offset))
      throw ConfigError("polytope face offset must be finite");
    const double n = l2_norm(f.normal);
    if (!(n > 0.0))
      throw ConfigError("polytope face normal must be non-zero");
    norms_.push_back(n);
  }
}

Label PolytopeOracle::predict(const ImageTensor &img) {
  check_input_shape(*this, img);
  for (const auto &f : faces_)
    if (dot(f.normal, img) + f.offset > 0.0)
      return Label{1};
  return Label{0};
}

double PolytopeOracle::optimal_distance(const ImageTensor &x) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    const double margin = dot(faces_[i].normal, x) + faces_[i].offset;
    if (margin > 0.0)
      throw PreconditionError("optimal_distance needs x inside the polytope");
    best = std::min(best, -margin / norms_[i]);
  }
  return best;
}

} // namespace trirl
