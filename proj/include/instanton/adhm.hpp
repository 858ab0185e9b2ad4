#pragma once

#include <optional>
#include <string>
#include <vector>

#include "instanton/qmatrix.hpp"
#include "instanton/rng.hpp"

namespace instanton {

enum class AdhmForm { Real, Complex };

// ADHM datum of charge k: T a symmetric k x k quaternionic matrix, P a quaternionic
// k-vector (column).  Real form: entries are plain quaternions, gauge group O(k).
// Complex form: entries are complexified quaternions with T hermitian with respect to
// the complexification unit, gauge group U(k).  Orthogonal-form data embeds in the
// unitary form with vanishing complexification part.
struct AdhmData {
  int k = 0;
  AdhmForm form = AdhmForm::Real;
  QMatrix t;   // k x k, symmetric (real form)
  QMatrix p;   // k x 1 (real form)
  CQMatrix tc; // k x k, hermitian (complex form)
  CQMatrix pc; // k x 1 (complex form)

  static AdhmData make_real(QMatrix t, QMatrix p);
  static AdhmData make_complex(CQMatrix t, CQMatrix p);
  // Charge-1 datum with center t0 and width rho.
  static AdhmData k1(const Quaternion& t0, double rho);

  const CQMatrix& t_complex() const;  // valid for either form (embeds when real)
  const CQMatrix& p_complex() const;
  double norm() const;
};

// Antisymmetric matrix of imaginary quaternions Im(T*T + PP*) for the real form
// (values in o(k) tensor R^3, zero diagonal); for the complex form entries carry a
// complexification part as well.  zeta0 shifts by -(I*zeta0)*Id and is only
// meaningful for the complex form (DomainError otherwise).
struct MomentValue {
  int k = 0;
  AdhmForm form = AdhmForm::Real;
  CQMatrix m;  // k x k; real-form values have zero complexification part
  double norm() const;
};

MomentValue moment_map(const AdhmData& d, const Quaternion& zeta0 = {});

// |moment| <= tol * (1 + |d|^2) decides the ADHM condition.
bool check_adhm(const AdhmData& d, double tol = 1e-10);

struct NondegeneracyVerdict {
  bool nondegenerate = false;
  // Singular-value minimum of the ADHM operator row over the search region, and the
  // point achieving it; for degenerate data the point is a witness of rank loss.
  double margin = 0.0;
  Quaternion witness;
};

// Searches x in H for rank loss of R_x = ((T - x)^*, P); rank can only drop within
// radius |T| + 2|P| + margin of the spectrum, so the search seeds from the left
// eigenvalues of T plus a grid of radius 2(|T| + |P|).  Inconclusive local searches
// throw ConvergenceFailure rather than report nondegenerate.
NondegeneracyVerdict nondegeneracy_check(const AdhmData& d, double tol = 1e-8);

// Group element: alpha in O(k) (real form) or U(k) (complex form), beta a unit
// quaternion (Sp(1)).  Action: (T, P) -> (alpha T alpha^-1, alpha P beta^-1).
struct GroupElement {
  QMatrix alpha_real;          // orthogonal, real entries (real form)
  Eigen::MatrixXcd alpha_cplx; // unitary (complex form)
  Quaternion beta{1, 0, 0, 0};
  bool is_complex = false;

  static GroupElement orthogonal(QMatrix alpha, const Quaternion& beta);
  static GroupElement unitary(Eigen::MatrixXcd alpha, const Quaternion& beta);
  // Diagonal torus element diag(exp(I*theta_j)) in U(k).
  static GroupElement torus(const std::vector<double>& theta);
};

AdhmData group_act(const GroupElement& g, const AdhmData& d);

// True when g fixes d to tolerance 1e-10 * (1 + |d|).
bool stabilizer_probe(const GroupElement& g, const AdhmData& d, double tol = 1e-10);

// Form conversion; complex -> real requires the datum to lie on the real locus.
AdhmData real_complex_convert(const AdhmData& d);

// Seeded random ADHM datum: Gaussian start, then Newton on the moment-map residual
// (least-norm steps on the underdetermined system) until |moment| <= 1e-12 scale,
// rejecting degenerate samples.  The induced distribution on moduli is an
// implementation artifact, not a statement about any natural measure.
AdhmData sample_adhm(int k, Rng& rng, double spread = 1.0);

}  // namespace instanton
