#include "instanton/qmatrix.hpp"

#include <algorithm>
#include <ostream>
#include <random>

namespace instanton {

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << "(" << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ")";
}
std::ostream& operator<<(std::ostream& os, const CQuaternion& q) {
  return os << "[re " << q.re << " im " << q.im << "]";
}

QMatrix embed_diag(const Quaternion& q, int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = q;
  return m;
}

CQMatrix complexify(const QMatrix& m) {
  CQMatrix c(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i) c.a[i] = CQuaternion(m.a[i]);
  return c;
}

QMatrix decomplexify(const CQMatrix& m, double tol) {
  double imag_sq = 0;
  for (const auto& e : m.a) imag_sq += e.im.norm_sq();
  if (std::sqrt(imag_sq) > tol * (1.0 + m.frobenius_norm()))
    throw WrongForm("decomplexify: data is off the real locus");
  QMatrix r(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i].re;
  return r;
}

Eigen::Matrix2cd complex_rep(const Quaternion& q) {
  const std::complex<double> a(q.w, q.x), b(q.y, q.z);
  Eigen::Matrix2cd m;
  m << a, b, -std::conj(b), std::conj(a);
  return m;
}

Eigen::Matrix2cd complex_rep(const CQuaternion& q) {
  return complex_rep(q.re) + std::complex<double>(0, 1) * complex_rep(q.im);
}

Quaternion quaternion_from_rep(const Eigen::Matrix2cd& m, double tol) {
  const std::complex<double> a = m(0, 0), b = m(0, 1);
  const double drift = std::abs(m(1, 0) + std::conj(b)) + std::abs(m(1, 1) - std::conj(a));
  if (drift > tol * (1.0 + m.norm()))
    throw WrongForm("quaternion_from_rep: block is not in the image of H");
  return {a.real(), a.imag(), b.real(), b.imag()};
}

CQuaternion cquaternion_from_rep(const Eigen::Matrix2cd& m) {
  // sigma(M) = J conj(M) J^-1 is the antilinear involution fixing rep(H).
  Eigen::Matrix2cd j;
  j << 0, 1, -1, 0;
  const Eigen::Matrix2cd sigma = j * m.conjugate() * j.transpose();
  const Eigen::Matrix2cd re = 0.5 * (m + sigma);
  const Eigen::Matrix2cd im = std::complex<double>(0, -0.5) * (m - sigma);
  return {quaternion_from_rep(re, 1e-6), quaternion_from_rep(im, 1e-6)};
}

namespace {

template <class S>
Eigen::MatrixXcd rep_impl(const QMatT<S>& m) {
  Eigen::MatrixXcd r(2 * m.rows, 2 * m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) r.block<2, 2>(2 * i, 2 * j) = complex_rep(m(i, j));
  return r;
}

}  // namespace

Eigen::MatrixXcd complex_rep(const QMatrix& m) { return rep_impl(m); }
Eigen::MatrixXcd complex_rep(const CQMatrix& m) { return rep_impl(m); }

QMatrix qmatrix_from_rep(const Eigen::MatrixXcd& m, double tol) {
  QMatrix r(static_cast<int>(m.rows() / 2), static_cast<int>(m.cols() / 2));
  for (int i = 0; i < r.rows; ++i)
    for (int j = 0; j < r.cols; ++j)
      r(i, j) = quaternion_from_rep(m.block<2, 2>(2 * i, 2 * j), tol);
  return r;
}

CQMatrix cqmatrix_from_rep(const Eigen::MatrixXcd& m) {
  CQMatrix r(static_cast<int>(m.rows() / 2), static_cast<int>(m.cols() / 2));
  for (int i = 0; i < r.rows; ++i)
    for (int j = 0; j < r.cols; ++j) r(i, j) = cquaternion_from_rep(m.block<2, 2>(2 * i, 2 * j));
  return r;
}

namespace {

Eigen::MatrixXcd rep_inverse(const Eigen::MatrixXcd& r, const char* who) {
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(r);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw DomainError(std::string(who) + ": singular matrix");
  return lu.inverse();
}

}  // namespace

QMatrix inverse(const QMatrix& m) {
  if (m.rows != m.cols) throw DimensionMismatch("inverse: matrix not square");
  return qmatrix_from_rep(rep_inverse(complex_rep(m), "inverse"), 1e-7);
}

CQMatrix inverse(const CQMatrix& m) {
  if (m.rows != m.cols) throw DimensionMismatch("inverse: matrix not square");
  return cqmatrix_from_rep(rep_inverse(complex_rep(m), "inverse"));
}

double smallest_singular_value(const QMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(complex_rep(m));
  return svd.singularValues().tail(1)(0);
}

CQuaternion sqrt_selfdagger(const CQuaternion& s) {
  Eigen::Matrix2cd h = complex_rep(s);
  h = 0.5 * (h + h.adjoint().eval());  // project out numerical drift
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
  if (es.eigenvalues().minCoeff() <= 0)
    throw DomainError("sqrt_selfdagger: scalar is not positive");
  const Eigen::Vector2d d = es.eigenvalues().array().sqrt();
  return cquaternion_from_rep(es.eigenvectors() * d.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
                              es.eigenvectors().adjoint());
}

CQuaternion inv_sqrt_selfdagger(const CQuaternion& s) {
  Eigen::Matrix2cd h = complex_rep(s);
  h = 0.5 * (h + h.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
  if (es.eigenvalues().minCoeff() <= 0)
    throw DomainError("inv_sqrt_selfdagger: scalar is not positive");
  const Eigen::Vector2d d = es.eigenvalues().array().rsqrt();
  return cquaternion_from_rep(es.eigenvectors() * d.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
                              es.eigenvectors().adjoint());
}

CQuaternion inv_scalar(const CQuaternion& s) {
  return cquaternion_from_rep(rep_inverse(complex_rep(s), "inv_scalar"));
}

namespace {

// One alternating-minimization pass for T v = lambda v: given lambda, v is the
// smallest right singular vector of T - lambda*Id (in quaternion coordinates
// v_j = a_j + j*beta_j, which is where matrix action is right-C-linear); given v,
// lambda = sum (T v)_i conj(v_i) / |v|^2 minimizes |T v - lambda v|.
struct EigPolish {
  const QMatrix& t;
  int k;

  Eigen::MatrixXcd op(const Quaternion& lambda) const {
    // Action of T - lambda on (a, beta) coordinates: [[A, -B], [conj(B), conj(A)]]
    // equals S * rep * S with S = diag(I, -I); reuse complex_rep and flip.
    QMatrix m = t;
    for (int i = 0; i < k; ++i) m(i, i) -= lambda;
    Eigen::MatrixXcd r = complex_rep(m);
    for (int bi = 0; bi < k; ++bi)
      for (int bj = 0; bj < k; ++bj) {
        r(2 * bi, 2 * bj + 1) *= -1;
        r(2 * bi + 1, 2 * bj) *= -1;
      }
    return r;
  }

  std::vector<Quaternion> vec_from_coords(const Eigen::VectorXcd& c) const {
    std::vector<Quaternion> v(k);
    for (int i = 0; i < k; ++i) {
      const std::complex<double> a = c(2 * i), beta = c(2 * i + 1);
      // q = a + j*beta = a + conj(beta) j
      v[i] = Quaternion(a.real(), a.imag(), beta.real(), -beta.imag());
    }
    return v;
  }

  double sigma_min(const Quaternion& lambda) const {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op(lambda));
    return svd.singularValues().tail(1)(0);
  }

  // sigma_min(op(lambda)) is conical near its zeros, so plain alternating updates
  // can orbit a plateau.  Descend along the exact singular-value gradient with a
  // secant step length sigma/|grad| (the first-order zero crossing), keep the
  // alternating lambda update as a second candidate, and kick deterministically
  // out of positive-value stationary points (singular-value crossings).
  double run(Quaternion& lambda, int iters) const {
    // op is affine in lambda: op(lambda) = B(T) - sum_mu lambda_mu B(e_mu Id)
    std::array<Eigen::MatrixXcd, 4> unit_op;
    for (int mu = 0; mu < 4; ++mu) {
      QMatrix m(k, k);
      for (int i = 0; i < k; ++i) m(i, i) = Quaternion::unit(mu);
      Eigen::MatrixXcd r = complex_rep(m);
      for (int bi = 0; bi < k; ++bi)
        for (int bj = 0; bj < k; ++bj) {
          r(2 * bi, 2 * bj + 1) *= -1;
          r(2 * bi + 1, 2 * bj) *= -1;
        }
      unit_op[mu] = r;
    }

    double best = std::numeric_limits<double>::infinity();
    Quaternion best_lambda = lambda;
    int since_improvement = 0;
    for (int it = 0; it < iters; ++it) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op(lambda), Eigen::ComputeFullU | Eigen::ComputeFullV);
      const double smin = svd.singularValues().tail(1)(0);
      if (smin < best * (1.0 - 1e-12)) {
        best = smin;
        best_lambda = lambda;
        since_improvement = 0;
      } else if (++since_improvement > 24) {
        break;
      }
      if (best < 1e-15) break;

      const Eigen::VectorXcd u = svd.matrixU().col(2 * k - 1);
      const Eigen::VectorXcd w = svd.matrixV().col(2 * k - 1);
      Quaternion grad;
      grad.w = -(u.adjoint() * unit_op[0] * w)(0).real();
      grad.x = -(u.adjoint() * unit_op[1] * w)(0).real();
      grad.y = -(u.adjoint() * unit_op[2] * w)(0).real();
      grad.z = -(u.adjoint() * unit_op[3] * w)(0).real();
      const double gn2 = grad.norm_sq();

      Quaternion next = lambda;
      double next_sigma = smin;
      if (gn2 > 1e-24) {
        // secant step toward the predicted zero, backtracking on overshoot
        double step = smin / gn2;
        for (int bt = 0; bt < 8; ++bt, step *= 0.5) {
          const Quaternion cand = lambda - step * grad;
          const double s = sigma_min(cand);
          if (s < next_sigma) {
            next = cand;
            next_sigma = s;
            break;
          }
        }
      }
      {
        // alternating candidate: least-squares lambda for the current null vector
        const std::vector<Quaternion> v = vec_from_coords(svd.matrixV().col(2 * k - 1));
        Quaternion num{};
        double den = 0;
        for (int i = 0; i < k; ++i) {
          Quaternion tv{};
          for (int j = 0; j < k; ++j) tv += t(i, j) * v[j];
          num += tv * v[i].conj();
          den += v[i].norm_sq();
        }
        const Quaternion cand = num * (1.0 / den);
        const double s = sigma_min(cand);
        if (s < next_sigma) {
          next = cand;
          next_sigma = s;
        }
      }
      if (next_sigma >= smin * (1.0 - 1e-12)) {
        // stationary with sigma > 0: a crossing of singular values; kick around it
        const int mu = it % 4;
        const double sign = (it / 4) % 2 ? -1.0 : 1.0;
        next = best_lambda + (2.0 * sign * best) * Quaternion::unit(mu);
      }
      lambda = next;
    }
    lambda = best_lambda;
    return best;
  }
};

}  // namespace

std::vector<LeftEigenvalue> left_eigenvalue_search(const QMatrix& t, double tol, int max_starts) {
  if (t.rows != t.cols) throw DimensionMismatch("left_eigenvalue_search: matrix not square");
  const int k = t.rows;
  const double scale = 1.0 + t.frobenius_norm();

  std::vector<Quaternion> seeds;
  seeds.push_back({});
  {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(complex_rep(t));
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      const std::complex<double> ev = es.eigenvalues()(i);
      seeds.push_back({ev.real(), ev.imag(), 0, 0});
    }
  }
  // Coarse deterministic grid plus a seeded random sprinkle, all scaled by |T|.
  for (double s : {0.5, 1.5})
    for (int mu = 0; mu < 4; ++mu)
      for (double sign : {1.0, -1.0}) seeds.push_back(sign * s * scale * Quaternion::unit(mu));
  std::mt19937_64 rng(0x5eedULL + static_cast<unsigned long long>(k));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (static_cast<int>(seeds.size()) < max_starts)
    seeds.push_back(scale * Quaternion(u(rng), u(rng), u(rng), u(rng)));
  if (static_cast<int>(seeds.size()) > max_starts) seeds.resize(max_starts);

  EigPolish polish{t, k};
  std::vector<LeftEigenvalue> found;
  for (Quaternion lambda : seeds) {
    const double res = polish.run(lambda, 60);
    if (res > tol) continue;
    const bool dup = std::any_of(found.begin(), found.end(), [&](const LeftEigenvalue& e) {
      return abs_distance(e.lambda, lambda) < 1e-6 * scale;
    });
    if (!dup) found.push_back({lambda, res});
  }
  if (found.empty())
    throw ConvergenceFailure("left_eigenvalue_search: no eigenvalue reached tolerance (every "
                             "quaternionic matrix has one; raise max_starts)");
  std::sort(found.begin(), found.end(), [](const LeftEigenvalue& a, const LeftEigenvalue& b) {
    const auto ca = a.lambda.components(), cb = b.lambda.components();
    return std::lexicographical_compare(cb.begin(), cb.end(), ca.begin(), ca.end());
  });
  return found;
}

}  // namespace instanton
