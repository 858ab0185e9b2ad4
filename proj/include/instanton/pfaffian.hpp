#pragma once

#include <Eigen/Dense>

namespace instanton {

// Pfaffian of a real antisymmetric 2m x 2m matrix via Householder tridiagonalization:
// Pf(Q A Q^T) = det(Q) Pf(A) and the Pfaffian of a skew tridiagonal matrix is the
// product of its odd-even superdiagonal entries.  Throws OddDimension for odd n and
// NotAntisymmetric when |A + A^T| exceeds tol * |A|.
double pfaffian(Eigen::MatrixXd a, double tol = 1e-12);

}  // namespace instanton
