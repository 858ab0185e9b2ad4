#include "instanton/adhm.hpp"

#include <algorithm>
#include <cmath>

namespace instanton {

namespace {

void require_symmetric(const QMatrix& t) {
  for (int i = 0; i < t.rows; ++i)
    for (int j = i + 1; j < t.cols; ++j)
      if (abs_distance(t(i, j), t(j, i)) > 1e-12 * (1.0 + t.frobenius_norm()))
        throw WrongForm("AdhmData: T must be symmetric");
}

void require_hermitian(const CQMatrix& t) {
  double drift = 0;
  for (int i = 0; i < t.rows; ++i)
    for (int j = 0; j < t.cols; ++j) {
      // Hermitian with respect to the complexification unit only: T_ij = cconj(T_ji).
      const CQuaternion d = t(i, j) - t(j, i).complex_conj();
      drift += d.re.norm_sq() + d.im.norm_sq();
    }
  if (std::sqrt(drift) > 1e-12 * (1.0 + t.frobenius_norm()))
    throw WrongForm("AdhmData: complex-form T must be hermitian in the complexification unit");
}

}  // namespace

AdhmData AdhmData::make_real(QMatrix t, QMatrix p) {
  if (t.rows != t.cols || p.rows != t.rows || p.cols != 1)
    throw DimensionMismatch("AdhmData: T must be k x k and P k x 1");
  require_symmetric(t);
  AdhmData d;
  d.k = t.rows;
  d.form = AdhmForm::Real;
  d.t = std::move(t);
  d.p = std::move(p);
  d.tc = complexify(d.t);
  d.pc = complexify(d.p);
  return d;
}

AdhmData AdhmData::make_complex(CQMatrix t, CQMatrix p) {
  if (t.rows != t.cols || p.rows != t.rows || p.cols != 1)
    throw DimensionMismatch("AdhmData: T must be k x k and P k x 1");
  require_hermitian(t);
  AdhmData d;
  d.k = t.rows;
  d.form = AdhmForm::Complex;
  d.tc = std::move(t);
  d.pc = std::move(p);
  return d;
}

AdhmData AdhmData::k1(const Quaternion& t0, double rho) {
  QMatrix t(1, 1), p(1, 1);
  t(0, 0) = t0;
  p(0, 0) = Quaternion::real(rho);
  return make_real(std::move(t), std::move(p));
}

const CQMatrix& AdhmData::t_complex() const { return tc; }
const CQMatrix& AdhmData::p_complex() const { return pc; }

double AdhmData::norm() const {
  const double tn = tc.frobenius_norm(), pn = pc.frobenius_norm();
  return std::sqrt(tn * tn + pn * pn);
}

double MomentValue::norm() const { return m.frobenius_norm(); }

MomentValue moment_map(const AdhmData& d, const Quaternion& zeta0) {
  const bool has_shift = zeta0.norm() > 0;
  if (has_shift && d.form == AdhmForm::Real)
    throw DomainError("moment_map: zeta0 deformation requires the complex form");
  if (std::abs(zeta0.w) > 0)
    throw DomainError("moment_map: zeta0 must be an imaginary quaternion");

  const CQMatrix& t = d.t_complex();
  const CQMatrix& p = d.p_complex();
  CQMatrix m = t.adjoint() * t + p * p.adjoint();
  // Quaternionic imaginary part, extended complex-linearly.
  for (auto& e : m.a) {
    e.re = e.re.im();
    e.im = e.im.im();
  }
  if (has_shift) {
    // Subtract (I * zeta0) Id: the complexification unit times the imaginary
    // quaternion zeta0, the central direction of u(k).
    for (int i = 0; i < m.rows; ++i) m(i, i) -= CQuaternion{{}, zeta0};
  }
  MomentValue v;
  v.k = d.k;
  v.form = d.form;
  v.m = std::move(m);
  return v;
}

bool check_adhm(const AdhmData& d, double tol) {
  const double n = d.norm();
  return moment_map(d).norm() <= tol * (1.0 + n * n);
}

namespace {

// Smallest singular value of the ADHM operator row [ (T - x)^* | P ] at x.
double adhm_row_sigma(const AdhmData& d, const Quaternion& x) {
  const int k = d.k;
  QMatrix row(k, k + 1);
  QMatrix xt = d.t;
  for (int i = 0; i < k; ++i) xt(i, i) -= x;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) row(i, j) = xt(j, i).conj();
    row(i, k) = d.p(i, 0);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(complex_rep(row));
  return svd.singularValues().tail(1)(0);
}

// Nelder-Mead on f: R^4 -> R, small and self-contained; returns best point found.
template <class F>
std::pair<Quaternion, double> nelder_mead(F&& f, Quaternion start, double step, int max_iter) {
  constexpr int n = 4;
  std::array<Quaternion, n + 1> pts;
  std::array<double, n + 1> val;
  pts[0] = start;
  for (int i = 0; i < n; ++i) pts[i + 1] = start + step * Quaternion::unit(i);
  for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);

  auto order = [&] {
    std::array<int, n + 1> idx{0, 1, 2, 3, 4};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return val[a] < val[b]; });
    std::array<Quaternion, n + 1> p2;
    std::array<double, n + 1> v2;
    for (int i = 0; i <= n; ++i) {
      p2[i] = pts[idx[i]];
      v2[i] = val[idx[i]];
    }
    pts = p2;
    val = v2;
  };

  order();
  for (int it = 0; it < max_iter; ++it) {
    Quaternion centroid{};
    for (int i = 0; i < n; ++i) centroid += pts[i] * (1.0 / n);
    const Quaternion xr = centroid + (centroid - pts[n]);
    const double fr = f(xr);
    if (fr < val[0]) {
      const Quaternion xe = centroid + 2.0 * (centroid - pts[n]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[n] = xe; val[n] = fe;
      } else {
        pts[n] = xr; val[n] = fr;
      }
    } else if (fr < val[n - 1]) {
      pts[n] = xr; val[n] = fr;
    } else {
      const Quaternion xc = centroid + 0.5 * (pts[n] - centroid);
      const double fc = f(xc);
      if (fc < val[n]) {
        pts[n] = xc; val[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          val[i] = f(pts[i]);
        }
      }
    }
    order();
    if ((pts[n] - pts[0]).norm() < 1e-12 && std::abs(val[n] - val[0]) < 1e-14) break;
  }
  return {pts[0], val[0]};
}

}  // namespace

NondegeneracyVerdict nondegeneracy_check(const AdhmData& d, double tol) {
  if (d.form != AdhmForm::Real)
    throw WrongForm("nondegeneracy_check: implemented for the real form (convert first)");
  const double scale = 1.0 + d.norm();
  auto f = [&](const Quaternion& x) { return adhm_row_sigma(d, x); };

  std::vector<Quaternion> seeds;
  try {
    for (const LeftEigenvalue& e : left_eigenvalue_search(d.t, 1e-8)) seeds.push_back(e.lambda);
  } catch (const ConvergenceFailure&) {
    // fall through to the grid; the grid plus polish still covers the spectrum region
  }
  const double r = 2.0 * (d.t.frobenius_norm() + d.p.frobenius_norm()) + 0.5;
  seeds.push_back({});
  for (int mu = 0; mu < 4; ++mu)
    for (double s : {-0.7, 0.7})
      seeds.push_back(s * r * Quaternion::unit(mu));

  NondegeneracyVerdict verdict;
  verdict.margin = std::numeric_limits<double>::infinity();
  bool any_converged = false;
  for (const Quaternion& s : seeds) {
    auto [x, fx] = nelder_mead(f, s, 0.1 * scale, 400);
    // Refine once with a smaller simplex around the best point.
    auto [x2, fx2] = nelder_mead(f, x, 1e-3 * scale, 200);
    if (fx2 < verdict.margin) {
      verdict.margin = fx2;
      verdict.witness = x2;
    }
    any_converged = true;
    if (fx2 <= tol) break;  // found rank loss, no need to continue
  }
  if (!any_converged) throw ConvergenceFailure("nondegeneracy_check: no search converged");
  // Ambiguous band: the minimum is numerically indistinguishable from rank loss but
  // did not reach the tolerance; refuse to certify either way.
  if (verdict.margin > tol && verdict.margin < 10 * tol)
    throw ConvergenceFailure("nondegeneracy_check: minimum in ambiguous band");
  verdict.nondegenerate = verdict.margin > tol;
  return verdict;
}

GroupElement GroupElement::orthogonal(QMatrix alpha, const Quaternion& beta) {
  for (const Quaternion& q : alpha.a)
    if (q.im().norm() > 1e-12) throw NotInGroup("GroupElement: orthogonal alpha must be real");
  Eigen::MatrixXd m(alpha.rows, alpha.cols);
  for (int i = 0; i < alpha.rows; ++i)
    for (int j = 0; j < alpha.cols; ++j) m(i, j) = alpha(i, j).w;
  if ((m * m.transpose() - Eigen::MatrixXd::Identity(m.rows(), m.rows())).norm() > 1e-10)
    throw NotInGroup("GroupElement: alpha not orthogonal");
  if (std::abs(beta.norm() - 1.0) > 1e-10) throw NotInGroup("GroupElement: |beta| != 1");
  GroupElement g;
  g.alpha_real = std::move(alpha);
  g.beta = beta;
  g.is_complex = false;
  return g;
}

GroupElement GroupElement::unitary(Eigen::MatrixXcd alpha, const Quaternion& beta) {
  if ((alpha * alpha.adjoint() - Eigen::MatrixXcd::Identity(alpha.rows(), alpha.rows())).norm() >
      1e-10)
    throw NotInGroup("GroupElement: alpha not unitary");
  if (std::abs(beta.norm() - 1.0) > 1e-10) throw NotInGroup("GroupElement: |beta| != 1");
  GroupElement g;
  g.alpha_cplx = std::move(alpha);
  g.beta = beta;
  g.is_complex = true;
  return g;
}

GroupElement GroupElement::torus(const std::vector<double>& theta) {
  Eigen::MatrixXcd alpha = Eigen::MatrixXcd::Zero(theta.size(), theta.size());
  for (size_t j = 0; j < theta.size(); ++j)
    alpha(j, j) = std::polar(1.0, theta[j]);
  return unitary(std::move(alpha), Quaternion::real(1.0));
}

namespace {

CQMatrix act_complex(const Eigen::MatrixXcd& alpha, const CQMatrix& m, bool invert_right) {
  // alpha has complex entries commuting with the quaternion units; multiply
  // entrywise: (alpha M)_ij = sum_l alpha_il M_lj with alpha_il acting as a + bI.
  CQMatrix r(m.rows, m.cols);
  const Eigen::MatrixXcd& a = alpha;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      CQuaternion s{};
      for (int l = 0; l < m.rows; ++l) s += a(i, l) * m(l, j);
      r(i, j) = s;
    }
  if (!invert_right) return r;
  // right-multiply by alpha^-1 = alpha^H
  CQMatrix rr(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      CQuaternion s{};
      for (int l = 0; l < m.cols; ++l) s += std::conj(a(j, l)) * r(i, l);
      rr(i, j) = s;
    }
  return rr;
}

}  // namespace

AdhmData group_act(const GroupElement& g, const AdhmData& d) {
  const Quaternion binv = g.beta.conj();  // |beta| = 1
  if (!g.is_complex) {
    if (d.form != AdhmForm::Real) throw WrongForm("group_act: orthogonal element on complex data");
    if (g.alpha_real.rows != d.k) throw DimensionMismatch("group_act: size mismatch");
    QMatrix t = g.alpha_real * d.t * g.alpha_real.transpose();
    QMatrix p = g.alpha_real * d.p;
    for (auto& e : p.a) e = e * binv;
    return AdhmData::make_real(std::move(t), std::move(p));
  }
  if (d.form != AdhmForm::Complex) throw WrongForm("group_act: unitary element on real data");
  if (g.alpha_cplx.rows() != d.k) throw DimensionMismatch("group_act: size mismatch");
  CQMatrix t = act_complex(g.alpha_cplx, d.tc, true);
  CQMatrix p = act_complex(g.alpha_cplx, d.pc, false);
  for (auto& e : p.a) e = e * binv;
  return AdhmData::make_complex(std::move(t), std::move(p));
}

bool stabilizer_probe(const GroupElement& g, const AdhmData& d, double tol) {
  const AdhmData gd = group_act(g, d);
  double diff_sq = 0;
  for (size_t i = 0; i < d.tc.a.size(); ++i) {
    const CQuaternion e = gd.tc.a[i] - d.tc.a[i];
    diff_sq += e.re.norm_sq() + e.im.norm_sq();
  }
  for (size_t i = 0; i < d.pc.a.size(); ++i) {
    const CQuaternion e = gd.pc.a[i] - d.pc.a[i];
    diff_sq += e.re.norm_sq() + e.im.norm_sq();
  }
  return std::sqrt(diff_sq) <= tol * (1.0 + d.norm());
}

AdhmData real_complex_convert(const AdhmData& d) {
  if (d.form == AdhmForm::Real) {
    AdhmData c = AdhmData::make_complex(d.tc, d.pc);
    return c;
  }
  QMatrix t = decomplexify(d.tc);
  QMatrix p = decomplexify(d.pc);
  return AdhmData::make_real(std::move(t), std::move(p));
}

namespace {

// Pack the real-form degrees of freedom: upper triangle of symmetric T (incl.
// diagonal) then P, 4 reals per quaternion.
struct RealCoords {
  int k;
  int dim() const { return 4 * (k * (k + 1) / 2 + k); }

  AdhmData unpack(const Eigen::VectorXd& v) const {
    QMatrix t(k, k), p(k, 1);
    int at = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        const Quaternion q{v(at), v(at + 1), v(at + 2), v(at + 3)};
        at += 4;
        t(i, j) = q;
        t(j, i) = q;
      }
    for (int i = 0; i < k; ++i) {
      p(i, 0) = Quaternion{v(at), v(at + 1), v(at + 2), v(at + 3)};
      at += 4;
    }
    return AdhmData::make_real(std::move(t), std::move(p));
  }

  // Moment residual: strict upper triangle of the antisymmetric imaginary-quaternion
  // matrix, 3 reals per entry.
  Eigen::VectorXd residual(const AdhmData& d) const {
    const MomentValue mv = moment_map(d);
    Eigen::VectorXd r(3 * k * (k - 1) / 2);
    int at = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        const Quaternion q = mv.m(i, j).re;
        r(at++) = q.x;
        r(at++) = q.y;
        r(at++) = q.z;
      }
    return r;
  }
};

}  // namespace

AdhmData sample_adhm(int k, Rng& rng, double spread) {
  if (k < 1) throw DimensionMismatch("sample_adhm: k must be >= 1");
  const RealCoords coords{k};
  const int n = coords.dim(), m = 3 * k * (k - 1) / 2;

  for (int attempt = 0; attempt < 32; ++attempt) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = spread * rng.normal();
    if (m == 0) {
      AdhmData d = coords.unpack(v);
      if (d.p(0, 0).norm() < 0.05 * spread) continue;  // nearly point-like, reject
      return d;
    }

    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      const Eigen::VectorXd r = coords.residual(coords.unpack(v));
      if (r.norm() <= 1e-12 * (1.0 + v.squaredNorm())) {
        ok = true;
        break;
      }
      // Analytic Jacobian, column by column: d mu = Im(dT* T + T* dT + dP P* + P dP*).
      Eigen::MatrixXd jac(m, n);
      const AdhmData d = coords.unpack(v);
      for (int c = 0; c < n; ++c) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(c) = 1.0;
        const AdhmData dd = coords.unpack(e);  // direction as a datum (linear packing)
        CQMatrix dm = dd.tc.adjoint() * d.tc + d.tc.adjoint() * dd.tc +
                      dd.pc * d.pc.adjoint() + d.pc * dd.pc.adjoint();
        int at = 0;
        for (int i = 0; i < k; ++i)
          for (int j = i + 1; j < k; ++j) {
            const Quaternion q = dm(i, j).re.im();
            jac(at++, c) = q.x;
            jac(at++, c) = q.y;
            jac(at++, c) = q.z;
          }
      }
      // Least-norm Newton step: delta = -J^T (J J^T)^-1 r.
      const Eigen::MatrixXd jjt = jac * jac.transpose();
      const Eigen::VectorXd delta = -jac.transpose() * jjt.ldlt().solve(r);
      if (!delta.allFinite()) break;
      v += delta;
    }
    if (!ok) continue;

    AdhmData d = coords.unpack(v);
    try {
      if (nondegeneracy_check(d).nondegenerate) return d;
    } catch (const ConvergenceFailure&) {
      continue;  // ambiguous sample; draw another
    }
  }
  throw ConvergenceFailure("sample_adhm: failed to produce a nondegenerate datum");
}

}  // namespace instanton
