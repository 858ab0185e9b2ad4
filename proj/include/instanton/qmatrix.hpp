#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "instanton/errors.hpp"
#include "instanton/quaternion.hpp"

namespace instanton {

// Dense matrix over the quaternions or their complexification.  Sizes here are tiny
// (k <= a few), so storage is a flat row-major vector and products are written out
// entrywise; anything that needs factorizations goes through the 2x2-block complex
// representation below.
template <class S>
struct QMatT {
  int rows = 0, cols = 0;
  std::vector<S> a;

  QMatT() = default;
  QMatT(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  static QMatT identity(int n) {
    QMatT m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S::real(1.0);
    return m;
  }

  S& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const S& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  QMatT adjoint() const {
    QMatT m(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(j, i) = dagger((*this)(i, j));
    return m;
  }

  QMatT transpose() const {
    QMatT m(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  double frobenius_norm() const {
    double s = 0;
    for (const S& q : a) {
      const double n = abs_value(q);
      s += n * n;
    }
    return std::sqrt(s);
  }

  QMatT& operator+=(const QMatT& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += b.a[i];
    return *this;
  }
  QMatT& operator-=(const QMatT& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b.a[i];
    return *this;
  }
  QMatT& operator*=(double s) {
    for (S& q : a) q *= s;
    return *this;
  }
};

template <class S>
QMatT<S> operator+(QMatT<S> x, const QMatT<S>& y) { return x += y; }
template <class S>
QMatT<S> operator-(QMatT<S> x, const QMatT<S>& y) { return x -= y; }
template <class S>
QMatT<S> operator*(QMatT<S> x, double s) { return x *= s; }
template <class S>
QMatT<S> operator*(double s, QMatT<S> x) { return x *= s; }

template <class S>
QMatT<S> operator*(const QMatT<S>& x, const QMatT<S>& y) {
  if (x.cols != y.rows) throw DimensionMismatch("qmatrix product: inner dimensions differ");
  QMatT<S> m(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int l = 0; l < x.cols; ++l) {
      const S& xi = x(i, l);
      for (int j = 0; j < y.cols; ++j) m(i, j) += xi * y(l, j);
    }
  return m;
}

using QMatrix = QMatT<Quaternion>;
using CQMatrix = QMatT<CQuaternion>;

// Scalar (left) multiplication q * M, entrywise from the left.
template <class S>
QMatT<S> scale_left(const S& q, QMatT<S> m) {
  for (auto& e : m.a) e = q * e;
  return m;
}

QMatrix embed_diag(const Quaternion& q, int n);

CQMatrix complexify(const QMatrix& m);
// Inverse embedding; throws WrongForm when any complexification component exceeds
// tol * frobenius_norm (the real locus is where the unitary-form data came from
// orthogonal-form data).
QMatrix decomplexify(const CQMatrix& m, double tol = 1e-10);

// q = a + b j  ->  [[a, b], [-conj(b), conj(a)]] with i -> diag(I, -I).  The map is an
// algebra homomorphism; extended complex-linearly it identifies the complexified
// quaternions with all of M_2(C).
Eigen::Matrix2cd complex_rep(const Quaternion& q);
Eigen::Matrix2cd complex_rep(const CQuaternion& q);
Quaternion quaternion_from_rep(const Eigen::Matrix2cd& m, double tol = 1e-9);
CQuaternion cquaternion_from_rep(const Eigen::Matrix2cd& m);

// Blockwise 2k x 2l complex representation and its inverses.
Eigen::MatrixXcd complex_rep(const QMatrix& m);
Eigen::MatrixXcd complex_rep(const CQMatrix& m);
QMatrix qmatrix_from_rep(const Eigen::MatrixXcd& m, double tol = 1e-9);
CQMatrix cqmatrix_from_rep(const Eigen::MatrixXcd& m);

// Inverse through the complex representation (LU).  Throws DomainError when the
// matrix is singular to working precision.
QMatrix inverse(const QMatrix& m);
CQMatrix inverse(const CQMatrix& m);

// Smallest singular value of the complex representation: zero exactly when the
// quaternionic matrix is singular as a left-multiplication operator.
double smallest_singular_value(const QMatrix& m);

// Self-dagger scalar functions via the hermitian 2x2 representation.
CQuaternion sqrt_selfdagger(const CQuaternion& s);
CQuaternion inv_sqrt_selfdagger(const CQuaternion& s);
CQuaternion inv_scalar(const CQuaternion& s);

struct LeftEigenvalue {
  Quaternion lambda;
  double residual = 0.0;  // |T v - lambda v| with |v| = 1 at the reported witness
};

// Left-eigenvalue search for a quaternionic k x k matrix: minimizes the smallest
// singular value of T - lambda*Id over lambda in H from many seeds (complex
// eigenvalues of the representation, a coarse grid scaled by |T|, and the origin),
// polishing each by alternating minimization.  Every quaternionic matrix has a left
// eigenvalue, so an empty result is a ConvergenceFailure, never a success.  The list
// contains the distinct eigenvalues found; no completeness claim is made.
std::vector<LeftEigenvalue> left_eigenvalue_search(const QMatrix& t, double tol = 1e-10,
                                                   int max_starts = 64);

}  // namespace instanton
