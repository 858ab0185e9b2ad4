#include "instanton/equivariant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "instanton/errors.hpp"
#include "instanton/pfaffian.hpp"
#include "quad_rules.hpp"

namespace instanton {
namespace {

using std::numbers::pi;

void require_slot(int j, int k, const char* who) {
  if (j < 0 || j >= k)
    throw DomainError(std::string(who) + ": slot " + std::to_string(j) +
                      " out of range for k = " + std::to_string(k));
}

// Multiplication by I*lambda (the complexification unit; central).
CQuaternion itimes(double lambda, const CQuaternion& q) {
  return {(-lambda) * q.im, lambda * q.re};
}

}  // namespace

DataTangent torus_vector_field(const TorusGenerator& xi, const AdhmData& d) {
  require_slot(xi.j, d.k, "torus_vector_field");
  const CQMatrix& t = d.t_complex();
  const CQMatrix& p = d.p_complex();
  DataTangent out{CQMatrix(d.k, d.k), CQMatrix(d.k, 1)};
  for (int b = 0; b < d.k; ++b) {
    if (b == xi.j) continue;
    out.dt(xi.j, b) = itimes(xi.lambda, t(xi.j, b));
    out.dt(b, xi.j) = itimes(-xi.lambda, t(b, xi.j));
  }
  out.dp(xi.j, 0) = itimes(xi.lambda, p(xi.j, 0));
  return out;
}

EquivariantCurvature equivariant_curvature(const AdhmData& d, const TorusGenerator& xi,
                                           const Quaternion& x) {
  require_slot(xi.j, d.k, "equivariant_curvature");
  EquivariantCurvature out;
  out.f = curvature_complex(d, x);
  const CFrame fr = build_frame_complex(d, x);
  const CQuaternion vj = fr.v(xi.j, 0);
  out.m = -itimes(xi.lambda, dagger(vj) * vj);
  return out;
}

EquivariantC2 equivariant_c2(const AdhmData& d, const TorusGenerator& xi, const Quaternion& x) {
  const EquivariantCurvature ec = equivariant_curvature(d, xi, x);
  const double n = kChargeNormalization / (pi * pi);
  EquivariantC2 out;
  out.deg4 = n * (re_part(ec.f[0] * ec.f[5]) - re_part(ec.f[1] * ec.f[4]) +
                  re_part(ec.f[2] * ec.f[3]));
  for (int c = 0; c < 6; ++c) out.deg2[c] = n * re_part(ec.m * ec.f[c]);
  out.deg0 = 0.5 * n * re_part(ec.m * ec.m);
  return out;
}

namespace {

// R = [(T - x)^* | P], k x (k+1).
CQMatrix adhm_row(const CQMatrix& t, const CQMatrix& p, const Quaternion& x) {
  const int k = t.rows;
  CQMatrix tx = t;
  for (int i = 0; i < k; ++i) tx(i, i) -= CQuaternion(x);
  const CQMatrix m = tx.adjoint();
  CQMatrix r(k, k + 1);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) r(i, j) = m(i, j);
    r(i, k) = p(i, 0);
  }
  return r;
}

CQMatrix row_tangent(const MixedTangent& v, int k) {
  CQMatrix dt = v.dt.rows == k && v.dt.cols == k ? v.dt : CQMatrix(k, k);
  for (int i = 0; i < k; ++i) dt(i, i) -= CQuaternion(v.dx);
  const CQMatrix m = dt.adjoint();
  CQMatrix r(k, k + 1);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) r(i, j) = m(i, j);
    if (v.dp.rows == k && v.dp.cols == 1) r(i, k) = v.dp(i, 0);
  }
  return r;
}

double trace_h(const CQMatrix& m) {
  CQuaternion s;
  for (int i = 0; i < m.rows; ++i) s += m(i, i);
  return 2.0 * re_part(s).real();
}

}  // namespace

double c2_form_projector(const AdhmData& d, const Quaternion& x,
                         std::span<const MixedTangent> v, double rho_reg) {
  if (v.size() != 4) throw DimensionMismatch("c2_form_projector: needs exactly 4 tangents");
  const CQMatrix& t = d.t_complex();
  const CQMatrix& p = d.p_complex();
  const int k = d.k;
  const CQMatrix r = adhm_row(t, p, x);
  CQMatrix gram = r * r.adjoint();
  gram(0, 0) += CQuaternion::real(rho_reg * rho_reg);
  const CQMatrix f = inverse(gram);
  const CQMatrix varpi = CQMatrix::identity(k + 1) - r.adjoint() * (f * r);

  std::array<CQMatrix, 4> dr;
  for (int i = 0; i < 4; ++i) dr[i] = row_tangent(v[i], k);
  auto b = [&](int i, int j) {
    const CQMatrix half = dr[i].adjoint() * (f * dr[j]);
    return half - half.adjoint();  // F self-dagger, so the swap is the adjoint
  };
  auto paired = [&](const CQMatrix& b1, const CQMatrix& b2) {
    return trace_h(b1 * (varpi * (b2 * varpi)));
  };
  const double sum = paired(b(0, 1), b(2, 3)) - paired(b(0, 2), b(1, 3)) +
                     paired(b(0, 3), b(1, 2));
  return kChargeNormalization / (4.0 * pi * pi) * 2.0 * sum;
}

double c2_density_projector(const AdhmData& d, const Quaternion& x, double rho_reg) {
  std::array<MixedTangent, 4> v;
  for (int mu = 0; mu < 4; ++mu) v[mu].dx = Quaternion::unit(mu);
  return c2_form_projector(d, x, v, rho_reg);
}

bool SingularStratum::contains(const AdhmData& d, double tol) const {
  if (d.k != k)
    throw DimensionMismatch("SingularStratum: charge mismatch");
  require_slot(j, k, "SingularStratum");
  const double scale = tol * (1.0 + d.norm());
  const CQMatrix& t = d.t_complex();
  const CQMatrix& p = d.p_complex();
  for (int b = 0; b < k; ++b) {
    if (b == j) continue;
    if (abs_value(t(j, b)) > scale || abs_value(t(b, j)) > scale) return false;
  }
  return abs_value(p(j, 0)) <= scale;
}

AdhmData SingularStratum::project(const AdhmData& d) const {
  if (d.k != k)
    throw DimensionMismatch("SingularStratum: charge mismatch");
  require_slot(j, k, "SingularStratum");
  if (d.form == AdhmForm::Real) {
    QMatrix t = d.t, p = d.p;
    for (int b = 0; b < k; ++b) {
      if (b == j) continue;
      t(j, b) = {};
      t(b, j) = {};
    }
    p(j, 0) = {};
    return AdhmData::make_real(std::move(t), std::move(p));
  }
  CQMatrix t = d.tc, p = d.pc;
  for (int b = 0; b < k; ++b) {
    if (b == j) continue;
    t(j, b) = {};
    t(b, j) = {};
  }
  p(j, 0) = {};
  return AdhmData::make_complex(std::move(t), std::move(p));
}

AdhmData reducible_embed(const Quaternion& t0, const AdhmData& d1) {
  const int k1 = d1.k;
  const CQMatrix& t1 = d1.t_complex();
  const CQMatrix& p1 = d1.p_complex();
  CQMatrix t(k1 + 1, k1 + 1), p(k1 + 1, 1);
  t(0, 0) = CQuaternion(t0);
  for (int i = 0; i < k1; ++i) {
    p(i + 1, 0) = p1(i, 0);
    for (int j = 0; j < k1; ++j) t(i + 1, j + 1) = t1(i, j);
  }
  return AdhmData::make_complex(std::move(t), std::move(p));
}

namespace {

struct AngularRule {
  std::vector<Quaternion> dir;     // unit directions
  std::vector<double> weight;      // solid-angle weights, sum 2 pi^2
};

AngularRule angular_rule(const Quaternion& center, int order) {
  SubmanifoldSpec s;
  s.kind = SubmanifoldKind::Sphere3;
  s.radius = 1.0;
  s.frame.offset = center;
  AngularRule rule;
  for (const SurfaceNode& n : surface_quadrature(s, order)) {
    Eigen::Matrix3d g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = dot(n.tangent[i], n.tangent[j]);
    rule.dir.push_back(n.x - center);
    rule.weight.push_back(n.weight * std::sqrt(std::max(0.0, g.determinant())));
  }
  return rule;
}

double fit_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t n = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(xs[i]);
    my += std::log(std::max(ys[i], 1e-300));
  }
  mx /= n;
  my /= n;
  double num = 0, den = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(xs[i]) - mx;
    num += dx * (std::log(std::max(ys[i], 1e-300)) - my);
    den += dx * dx;
  }
  return num / den;
}

}  // namespace

ReducibleCheck reducible_restriction_check(const Quaternion& t0, const AdhmData& d1,
                                           const ReducibleOptions& opt) {
  if (d1.k < 1) throw DomainError("reducible_restriction_check: empty residual datum");
  if (opt.rhos.empty()) throw DomainError("reducible_restriction_check: no regulator values");
  const double reach = 2.2 * std::max(opt.sigma_radius, opt.ball_radius) + 0.4;
  const CQMatrix& t1 = d1.t_complex();
  for (int i = 0; i < d1.k; ++i)
    if (abs_value(t1(i, i) - CQuaternion(t0)) < reach)
      throw DomainError("reducible_restriction_check: residual datum too close to t0");

  const AdhmData dk = reducible_embed(t0, d1);
  ReducibleCheck out;
  out.rhos = opt.rhos;

  const std::array<Quaternion, 5> probe_offsets{
      Quaternion{1.1, 0.3, -0.2, 0.4}, Quaternion{-0.7, 0.9, 0.5, -0.1},
      Quaternion{0.2, -1.2, 0.3, 0.6}, Quaternion{0.5, 0.4, -1.0, -0.6},
      Quaternion{-0.3, -0.5, 0.8, 1.0}};
  for (double rho : opt.rhos) {
    double worst = 0;
    for (const Quaternion& off : probe_offsets) {
      const Quaternion x = t0 + off;
      worst = std::max(worst,
                       std::abs(c2_density_projector(dk, x, rho) - c2_density(d1, x)));
    }
    out.far_error.push_back(worst);
  }
  out.far_slope = fit_log_slope(out.rhos, out.far_error);

  // Excess mass in the ball at the smallest regulator: two radial segments so
  // the Gauss nodes resolve the width-rho core.
  const double rho_min = *std::min_element(opt.rhos.begin(), opt.rhos.end());
  const AngularRule ball_ang = angular_rule(t0, opt.ball_sphere_order);
  const double split = std::min(20.0 * rho_min, opt.ball_radius);
  std::vector<std::pair<double, double>> segments{{0.0, split}};
  if (split < opt.ball_radius) segments.emplace_back(split, opt.ball_radius);
  double mass = 0;
  for (const auto& [a, bnd] : segments) {
    const rules::Rule1d rad = rules::gauss_legendre_on(opt.ball_radial_order, a, bnd);
    for (size_t ri = 0; ri < rad.x.size(); ++ri) {
      const double rr = rad.x[ri];
      double shell = 0;
      for (size_t ai = 0; ai < ball_ang.dir.size(); ++ai) {
        const Quaternion x = t0 + rr * ball_ang.dir[ai];
        shell += ball_ang.weight[ai] *
                 (c2_density_projector(dk, x, rho_min) - c2_density(d1, x));
      }
      mass += rad.w[ri] * rr * rr * rr * shell;
    }
  }
  out.near_mass = mass;

  // mu-level pairing: move t0 along a ray crossing a 3-sphere Sigma and integrate
  // the dT0-component of the restricted moduli 1-form; the charge-k1 part has no
  // dT0-component, so this isolates the excess.  Same ray against the mollified
  // dual of Sigma is the oracle.
  SubmanifoldSpec sigma;
  sigma.kind = SubmanifoldKind::Sphere3;
  sigma.radius = opt.sigma_radius;
  sigma.frame.offset = t0;
  sigma.order = opt.sigma_order;
  out.sigma = sigma;

  const Quaternion u{1, 0, 0, 0};
  const double rr = opt.sigma_radius;
  const double half = std::min(8.0 * std::max(opt.mu_rho, opt.pd_width), 0.6 * rr);
  const std::array<std::pair<double, double>, 3> path{
      {{0.0, rr - half}, {rr - half, rr + half}, {rr + half, 2.0 * rr}}};

  const auto sigma_nodes = surface_quadrature(sigma);
  CQMatrix dt0(dk.k, dk.k);
  dt0(0, 0) = CQuaternion(u);
  const PoincareDual dual = poincare_dual_mollified(sigma, opt.pd_width);

  double mu_acc = 0, pd_acc = 0;
  for (const auto& [a, bnd] : path) {
    const rules::Rule1d seg = rules::gauss_legendre_on(opt.path_order, a, bnd);
    for (size_t si = 0; si < seg.x.size(); ++si) {
      const Quaternion c = t0 + seg.x[si] * u;
      const AdhmData dks = reducible_embed(c, d1);
      double e = 0;
      for (const SurfaceNode& n : sigma_nodes) {
        std::array<MixedTangent, 4> vs;
        for (int i = 0; i < 3; ++i) vs[i].dx = n.tangent[i];
        vs[3].dt = dt0;
        e += n.weight * c2_form_projector(dks, n.x, vs, opt.mu_rho);
      }
      mu_acc += seg.w[si] * e;
    }
  }
  // The dual's support is exactly |s - rr| <= pd_width, much narrower than the
  // mu regulator; give the crossing its own resolved segment.
  const double wpd = 2.0 * opt.pd_width;
  const std::array<std::pair<double, double>, 3> path_pd{
      {{0.0, rr - wpd}, {rr - wpd, rr + wpd}, {rr + wpd, 2.0 * rr}}};
  for (const auto& [a, bnd] : path_pd) {
    const rules::Rule1d seg = rules::gauss_legendre_on(opt.path_order, a, bnd);
    for (size_t si = 0; si < seg.x.size(); ++si)
      pd_acc += seg.w[si] * dual(t0 + seg.x[si] * u, std::span<const Quaternion>(&u, 1));
  }
  out.mu_excess = mu_acc;
  out.pd_pairing = pd_acc;
  return out;
}

Eigen::MatrixXd euler_normal_operator(int k, int j, double lambda) {
  require_slot(j, k, "euler_normal_operator");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(8 * k, 8 * k);
  int slot = 0;
  auto put = [&](double eta) {
    for (int mu = 0; mu < 4; ++mu) {
      const int r = 8 * slot + 2 * mu;
      a(r, r + 1) = -eta * lambda;
      a(r + 1, r) = eta * lambda;
    }
    ++slot;
  };
  for (int b = 0; b < k; ++b)
    if (b != j) put(-1.0);  // coupling T_bj rotates by -I lambda
  put(+1.0);                // P_j rotates by +I lambda
  return a;
}

EulerClass euler_class(int k, int j) {
  const double c = 1.0 / (2.0 * pi);
  const double pf1 = pfaffian(c * euler_normal_operator(k, j, 1.0));
  const double pf2 = pfaffian(c * euler_normal_operator(k, j, 2.0));
  EulerClass out;
  out.exponent = static_cast<int>(std::lround(std::log2(pf2 / pf1)));
  out.coefficient = pf1;
  out.fit_residual = std::abs(pf2 - pf1 * std::pow(2.0, out.exponent)) / std::abs(pf2);
  return out;
}

double WeylData::operator()(std::span<const double> z) const {
  if (static_cast<int>(z.size()) != k)
    throw DimensionMismatch("WeylData: expected " + std::to_string(k) + " arguments");
  double prod = 1;
  for (const auto& [a, b] : positive_roots) prod *= z[a] - z[b];
  return prod;
}

WeylData weyl_data(int k) {
  if (k < 1) throw DomainError("weyl_data: k must be positive");
  WeylData w;
  w.k = k;
  w.weyl_order = 1;
  for (int i = 2; i <= k; ++i) w.weyl_order *= i;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) w.positive_roots.emplace_back(a, b);
  return w;
}

std::vector<double> pr_ev(std::span<const double> coeffs) {
  std::vector<double> out(coeffs.begin(), coeffs.end());
  for (size_t i = 1; i < out.size(); i += 2) out[i] = 0.0;
  return out;
}

}  // namespace instanton
