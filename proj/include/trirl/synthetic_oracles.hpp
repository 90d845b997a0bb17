#ifndef TRIRL_SYNTHETIC_ORACLES_HPP
#define TRIRL_SYNTHETIC_ORACLES_HPP

#include <vector>

#include "trirl/oracle.hpp"

namespace trirl {

/// Two-class oracles whose minimal l2 perturbation is known in closed form.
class SyntheticOracle : public Oracle {
public:
  std::uint32_t num_classes() const override { return 2; }
  /// Distance from x to the nearest point with a different label.
  virtual double optimal_distance(const ImageTensor &x) const = 0;
};

/// label 1 iff <w, img> + b > 0, else 0.
class HalfspaceOracle : public SyntheticOracle {
public:
  HalfspaceOracle(ImageTensor normal, double offset);

  Label predict(const ImageTensor &img) override;
  Shape input_shape() const override { return normal_.shape(); }
  std::string describe() const override { return "halfspace"; }
  double optimal_distance(const ImageTensor &x) const override;

  double signed_margin(const ImageTensor &img) const;
  const ImageTensor &normal() const { return normal_; }
  double offset() const { return offset_; }

private:
  ImageTensor normal_;
  double offset_;
  double norm_;
};

/// label 0 strictly inside the ball, 1 on or outside it.
class SphereOracle : public SyntheticOracle {
public:
  SphereOracle(ImageTensor center, double radius);

  Label predict(const ImageTensor &img) override;
  Shape input_shape() const override { return center_.shape(); }
  std::string describe() const override { return "sphere"; }
  double optimal_distance(const ImageTensor &x) const override;

  const ImageTensor &center() const { return center_; }
  double radius() const { return radius_; }

private:
  ImageTensor center_;
  double radius_;
};

/// label 0 inside the polytope {<w_i, img> + b_i <= 0 for all faces}, 1 outside.
class PolytopeOracle : public SyntheticOracle {
public:
  struct Face {
    ImageTensor normal;
    double offset = 0.0;
  };

  explicit PolytopeOracle(std::vector<Face> faces);

  Label predict(const ImageTensor &img) override;
  Shape input_shape() const override { return faces_.front().normal.shape(); }
  std::string describe() const override { return "polytope"; }
  /// Requires x inside the polytope: minimum distance to any face plane.
  double optimal_distance(const ImageTensor &x) const override;

  const std::vector<Face> &faces() const { return faces_; }

private:
  std::vector<Face> faces_;
  std::vector<double> norms_;
};

} // namespace trirl

#endif // TRIRL_SYNTHETIC_ORACLES_HPP
