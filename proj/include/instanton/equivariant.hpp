#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "instanton/adhm.hpp"
#include "instanton/gauge.hpp"
#include "instanton/submanifold.hpp"

namespace instanton {

// Generator of the circle acting on auxiliary slot j (0-based) with speed lambda.
// The rotation unit is the complexification unit I, not a quaternion unit, so the
// action only exists on unitary-form data; orthogonal-form data embeds first.
struct TorusGenerator {
  int j = 0;
  double lambda = 1.0;
};

// Tangent to the datum space: the action vector field xi -> ([xi, T], xi P).
struct DataTangent {
  CQMatrix dt;  // k x k
  CQMatrix dp;  // k x 1
};

DataTangent torus_vector_field(const TorusGenerator& xi, const AdhmData& d);

// Curvature components together with the moment term m = -v^* L(xi) v, where
// L(xi) = I lambda on slot j of the extended column and zero elsewhere.
struct EquivariantCurvature {
  std::array<CQuaternion, 6> f;  // pair order as in gauge.hpp
  CQuaternion m;
};

EquivariantCurvature equivariant_curvature(const AdhmData& d, const TorusGenerator& xi,
                                           const Quaternion& x);

// Equivariantly closed refinement of the charge density, graded by form degree:
//   deg4                -- coefficient of dx1^dx2^dx3^dx4 (equals c2_density, no xi)
//   deg2[c]             -- coefficient of the 2-form with pair index c
//   deg0                 -- the scalar term
// normalized with the same constant that makes deg4 integrate to the charge.
// Values are complex; on the real locus the imaginary parts vanish.
struct EquivariantC2 {
  std::complex<double> deg4{};
  std::array<std::complex<double>, 6> deg2{};
  std::complex<double> deg0{};
};

EquivariantC2 equivariant_c2(const AdhmData& d, const TorusGenerator& xi, const Quaternion& x);

// Tangent vector on R^4 x (datum space).  Empty matrices mean zero.
struct MixedTangent {
  Quaternion dx;
  CQMatrix dt;
  CQMatrix dp;
};

// Charge-density 4-form through the Green operator and kernel projector of the
// ADHM row R = [(T - x)^* | P] instead of a pointwise frame:
//   F_rho = (R R^* + rho_reg^2 e_00)^-1,   varpi = 1 - R^* F_rho R,
//   B(V, W) = dR(V)^* F_rho dR(W) - (V <-> W),   dR(V) = [(dT - dx)^* | dP].
// At rho_reg = 0 on nondegenerate data this equals the frame-route density; with
// rho_reg > 0 it stays finite on data whose slot 0 has decoupled (P_0 = 0), which
// is what the reducible-restriction check probes.  Accepts tangents that move the
// datum as well as the point, so mu-type moduli forms restrict through it.
double c2_form_projector(const AdhmData& d, const Quaternion& x,
                         std::span<const MixedTangent> v, double rho_reg = 0.0);
double c2_density_projector(const AdhmData& d, const Quaternion& x, double rho_reg = 0.0);

// Fixed locus of the slot-j circle inside charge-k data: row/column j of T off-
// diagonal and entry j of P vanish, so the datum splits off a free center T_jj.
struct SingularStratum {
  int k = 1;
  int j = 0;

  bool contains(const AdhmData& d, double tol = 1e-10) const;
  AdhmData project(const AdhmData& d) const;  // zero the coupling entries
};

// diag(t0, T_1) with P = (0, P_1): the charge-(k1+1) datum sitting on the slot-0
// stratum over the charge-k1 datum d1.  Satisfies the ADHM condition iff d1 does.
AdhmData reducible_embed(const Quaternion& t0, const AdhmData& d1);

struct ReducibleOptions {
  std::vector<double> rhos = {0.2, 0.1, 0.05, 0.025};
  double ball_radius = 0.6;  // near-mass ball around t0
  int ball_radial_order = 48;
  int ball_sphere_order = 12;
  double sigma_radius = 1.0;  // 3-sphere around t0 for the mu-level pairing
  int sigma_order = 16;       // must resolve features of width mu_rho on sigma
  double mu_rho = 0.15;       // regulator for the mu-level pairing (wider than rhos)
  int path_order = 24;        // Gauss order per path segment in the mu-level pairing
  double pd_width = 0.08;
};

// What restriction to the slot-0 stratum leaves behind: the regularized density
// minus the charge-k1 density is a unit of charge concentrated at x = t0.
struct ReducibleCheck {
  std::vector<double> rhos;
  std::vector<double> far_error;  // max over probe points of |reg density - k1 density|
  double far_slope = 0.0;         // log-log fit; the excess decays like rho^4
  double near_mass = 0.0;         // excess integral over the ball, smallest rho
  double mu_excess = 0.0;         // dT0-component 1-form integrated along a ray crossing Sigma
  double pd_pairing = 0.0;        // same ray against the mollified dual of Sigma
  SubmanifoldSpec sigma;
};

ReducibleCheck reducible_restriction_check(const Quaternion& t0, const AdhmData& d1,
                                           const ReducibleOptions& opt = {});

// The slot-j circle acts on the normal directions to its fixed locus -- the k-1
// coupling entries T_aj (a != j) by -I lambda, and P_j by +I lambda; the free
// center T_jj is tangent to the locus and excluded.  Each complexified-quaternion
// entry is 8 real dimensions, so the operator is a real antisymmetric 8k x 8k
// matrix, written in the basis that interleaves (real, complexification) parts
// per quaternion component, slot by slot.
Eigen::MatrixXd euler_normal_operator(int k, int j, double lambda);

// Pfaffian of (1/2pi) times the normal operator, fit as coefficient * lambda^exponent
// from evaluations at lambda = 1 and 2.  Expected (lambda/2pi)^(4k) for every j.
struct EulerClass {
  int exponent = 0;
  double coefficient = 0.0;
  double fit_residual = 0.0;  // relative mismatch of the two-point monomial fit
};

EulerClass euler_class(int k, int j);

// Weyl antiinvariant of u(k): product of z_a - z_b over positive roots a < b,
// |W| = k!.  Charge-k localization sums carry one factor per fixed slot.
struct WeylData {
  int k = 1;
  long weyl_order = 1;
  std::vector<std::pair<int, int>> positive_roots;

  double operator()(std::span<const double> z) const;
};

WeylData weyl_data(int k);

// Even-degree projection of a polynomial given by coefficients (constant first).
std::vector<double> pr_ev(std::span<const double> coeffs);

}  // namespace instanton
