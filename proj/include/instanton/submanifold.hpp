#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "instanton/quaternion.hpp"

namespace instanton {

enum class SubmanifoldKind { Point, Circle, Sphere2, Sphere3, Torus2 };

// Affine isometry x -> rotation * x_model + offset placing a model submanifold.
struct Placement {
  Eigen::Matrix4d rotation = Eigen::Matrix4d::Identity();
  Quaternion offset{};
};

// Compact submanifold of R^4 from a model catalog.  Model parametrizations (before
// placement), with parameter order fixing the orientation:
//   point:    {0}
//   circle:   u -> r (cos u, sin u, 0, 0)
//   sphere2:  (theta, phi) -> r (sin t cos p, sin t sin p, cos t, 0)
//   sphere3:  (psi, theta, phi) -> r (cos s, sin s cos t, sin s sin t cos p, ...)
//   torus2:   (u, v) -> (r cos u, r sin u, r2 cos v, r2 sin v)
// Linking numbers and dual pairings are quoted relative to these orientations.
struct SubmanifoldSpec {
  SubmanifoldKind kind = SubmanifoldKind::Point;
  double radius = 1.0;
  double radius2 = 0.25;  // torus2 only
  Placement frame;
  int order = 8;  // quadrature refinement parameter

  int dim() const;
  void validate() const;  // DegenerateParametrization / NotInGroup on bad input
};

struct SurfaceNode {
  Quaternion x;
  std::array<Quaternion, 3> tangent;  // first dim() entries valid: dx/du_i, unnormalized
  double weight;                      // parameter-measure weight
};

// Product quadrature nodes on the placed submanifold; weights are for integrating
// pullbacks over the parameter domain (the form evaluated on the stored tangents).
std::vector<SurfaceNode> surface_quadrature(const SubmanifoldSpec& s);
std::vector<SurfaceNode> surface_quadrature(const SubmanifoldSpec& s, int order_override);

// Integral of a d-form: functor(x, tangents) must be the form value on the given
// (unnormalized) tangent vectors.
using FormOnVectors = std::function<double(const Quaternion&, std::span<const Quaternion>)>;
double integrate_form(const SubmanifoldSpec& s, const FormOnVectors& form);

// Scalar integral with respect to the induced volume (Gram determinant).
double integrate_scalar(const SubmanifoldSpec& s, const std::function<double(const Quaternion&)>& f);

// Minimum distance between two specs (sampled; adequate as a disjointness guard).
double min_distance(const SubmanifoldSpec& a, const SubmanifoldSpec& b);

// Mollified Poincare dual: a closed (4-d)-form supported in a tube of half-width
// `width` around the submanifold, with unit fiber integral; wedging a closed d-form
// against it reproduces the surface integral up to O(width^2).
class PoincareDual {
 public:
  PoincareDual(const SubmanifoldSpec& s, double width);
  int degree() const { return 4 - spec_.dim(); }
  const SubmanifoldSpec& spec() const { return spec_; }
  double width() const { return width_; }
  // Value on degree() many vectors.
  double operator()(const Quaternion& x, std::span<const Quaternion> vectors) const;

 private:
  SubmanifoldSpec spec_;
  double width_;
  double norm1_ = 1.0;  // 1D bump normalization
  double norm2_ = 1.0;  // 2D bump normalization
  double norm4_ = 1.0;  // 4D bump normalization
};

PoincareDual poincare_dual_mollified(const SubmanifoldSpec& s, double width);

}  // namespace instanton
