#pragma once

#include <array>

#include "instanton/adhm.hpp"
#include "instanton/quadrature.hpp"

namespace instanton {

// Orientation constant for the Hodge star on 2-forms, relative to the coordinate
// order x = x1 + x2 i + x3 j + x4 k and dx1^dx2^dx3^dx4.  The ADHM curvature below
// is *anti*-self-dual with this value (self-dual with the opposite sign); flipping
// the constant, never the formulas, is the supported way to change conventions.
inline constexpr double kOrientation = -1.0;

// Global normalization fixed once against the charge-1 closed form so that the total
// second-Chern integral equals the charge k.  With the 2x2-representation trace
// (tr q = 2 Re q) the raw (1/4pi^2) tr(F^F) density integrates to -2k, hence -1/2.
inline constexpr double kChargeNormalization = -0.5;

// Pointwise frame for the null space of the ADHM operator row R_x = [(T - x)^* | P]:
// v = [N; 1] sigma^-1 with N = -M^-1 P, M = (T - x)^*, sigma^2 = 1 + N^* N.
// The same formulas evaluated over the complexified quaternions serve the
// unitary-form data; entries then carry a complexification part.
template <class S>
struct FrameT {
  QMatT<S> v;     // (k+1) x 1, v^* v = 1
  QMatT<S> n;     // k x 1 unnormalized top block
  QMatT<S> minv;  // M^-1
  QMatT<S> f;     // (R R^*)^-1, the ADHM Green operator at x
  S sigma;        // self-dagger square root of 1 + N^* N
  S sigma_inv;
};
using Frame = FrameT<Quaternion>;
using CFrame = FrameT<CQuaternion>;

// Throws GaugeSingularity when x is within ~1e-6 of a left eigenvalue of T (rank
// loss of M), and WrongForm when the datum's form does not match the overload.
Frame build_frame(const AdhmData& d, const Quaternion& x);
CFrame build_frame_complex(const AdhmData& d, const Quaternion& x);  // either form

enum class DerivMode { Analytic, FiniteDifference };

// Connection A_mu = Im(v^* d_mu v), an imaginary-quaternion 1-form in the unitary
// gauge v^* v = 1.  Finite-difference mode applies central differences to the frame
// with step h (default 1e-4 * (1 + |x|)); agreement with analytic mode is O(h^2).
struct Connection {
  std::array<Quaternion, 4> a;
};
Connection connection(const AdhmData& d, const Quaternion& x,
                      DerivMode mode = DerivMode::Analytic, double h = 0.0);

// Curvature F_mn = d_m A_n - d_n A_m + [A_m, A_n], components stored in the order
// (01, 02, 03, 12, 13, 23).  Analytic mode uses the algebraically equivalent
// sandwich F_mn = u^* (e_m F e_n^bar - e_n F e_m^bar) u with u the top block of v;
// finite-difference mode differentiates the analytic connection.
struct Curvature {
  std::array<Quaternion, 6> f;
  double norm() const;
};
Curvature curvature(const AdhmData& d, const Quaternion& x,
                    DerivMode mode = DerivMode::Analytic, double h = 0.0);
std::array<CQuaternion, 6> curvature_complex(const AdhmData& d, const Quaternion& x);

// |F + *F| / |F| with the documented orientation; ~1e-14 for analytic curvature.
double asd_residual(const Curvature& f);

// Calibrated second-Chern density: kChargeNormalization * (1/4pi^2) tr(F ^ F)
// coefficient of dx1^dx2^dx3^dx4; integrates to the charge k.
double c2_density(const AdhmData& d, const Quaternion& x);
double c2_density_from_curvature(const Curvature& f);

// Total charge by R^4 quadrature.  A zero-initialized spec picks defaults: Monte
// Carlo importance mixture over the k diagonal centers of T for k > 1, radial-
// spherical around the single center for k = 1.  Nodes that would hit a gauge
// singularity are jittered deterministically by ~1e-5 * scale.
IntegralResult charge(const AdhmData& d, R4QuadratureSpec spec = {.scheme = QuadScheme::RadialSpherical,
                                                                  .scale = 0.0, .budget = 0});

// Everything the pipeline produces at one point, for serialization and goldens.
struct GaugeSample {
  Quaternion x;
  std::vector<Quaternion> v;
  std::array<Quaternion, 4> a;
  std::array<Quaternion, 6> f;
  double c2 = 0.0;
};
GaugeSample evaluate_sample(const AdhmData& d, const Quaternion& x);

// Hand-coded charge-1 closed forms (independent of the generic pipeline; used as
// its oracle).  Datum: center t0, width rho, P = rho real.
struct ClosedFormK1 {
  Quaternion t0;
  double rho = 1.0;

  Connection connection(const Quaternion& x) const;
  Curvature curvature(const Quaternion& x) const;
  double c2(const Quaternion& x) const;  // 6 rho^4 / (pi^2 Delta^8)
  double peak_density() const;           // 6 / (pi^2 rho^4)
};

}  // namespace instanton
