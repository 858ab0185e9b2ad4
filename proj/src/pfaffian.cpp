#include "instanton/pfaffian.hpp"

#include <cmath>

#include "instanton/errors.hpp"

namespace instanton {

double pfaffian(Eigen::MatrixXd a, double tol) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw DimensionMismatch("pfaffian: matrix not square");
  if (n % 2 != 0) throw OddDimension("pfaffian: odd dimension");
  const double scale = a.norm();
  if ((a + a.transpose()).norm() > tol * std::max(1.0, scale))
    throw NotAntisymmetric("pfaffian: matrix not antisymmetric");
  if (n == 0) return 1.0;

  // Householder reflectors zeroing column entries below the first subdiagonal,
  // applied symmetrically; each reflector has determinant -1.
  double sign = 1.0;
  for (Eigen::Index i = 0; i + 2 < n; ++i) {
    Eigen::VectorXd x = a.col(i).segment(i + 1, n - i - 1);
    const double xn = x.norm();
    if (xn == 0.0) {
      // Column already reduced; the vanishing superdiagonal entry t(i, i+1) is a
      // factor of the pfaffian only at even i (the product pairs (0,1)(2,3)...).
      if (i % 2 == 0) return 0.0;
      continue;
    }
    Eigen::VectorXd v = x;
    v(0) += (x(0) >= 0 ? xn : -xn);
    const double vn2 = v.squaredNorm();
    if (vn2 < 1e-300) continue;  // column already reduced
    const auto rows = Eigen::seq(i + 1, n - 1);
    Eigen::MatrixXd block = a(rows, Eigen::all);
    block -= (2.0 / vn2) * v * (v.transpose() * block);
    a(rows, Eigen::all) = block;
    Eigen::MatrixXd cols = a(Eigen::all, rows);
    cols -= (2.0 / vn2) * (cols * v) * v.transpose();
    a(Eigen::all, rows) = cols;
    sign = -sign;
  }

  double pf = sign;
  for (Eigen::Index i = 0; i + 1 < n; i += 2) pf *= a(i, i + 1);
  return pf;
}

}  // namespace instanton
