#include "instanton/gauge.hpp"

#include <cmath>
#include <numbers>

namespace instanton {
namespace {

using std::numbers::pi;

// Scalar helpers bridging the two pipelines.  The real frame has a genuinely real
// sigma^2 (N^* N is a sum of norm squares); the complexified frame needs the
// self-dagger root.
Quaternion inv_sqrt_scalar(const Quaternion& s) {
  if (s.im().norm() > 1e-9 * (1.0 + std::abs(s.w)))
    throw DomainError("frame: sigma^2 drifted off the reals");
  if (!(s.w > 0)) throw DomainError("frame: sigma^2 not positive");
  return Quaternion::real(1.0 / std::sqrt(s.w));
}
CQuaternion inv_sqrt_scalar(const CQuaternion& s) { return inv_sqrt_selfdagger(s); }

Quaternion sqrt_scalar(const Quaternion& s) {
  if (!(s.w > 0)) throw DomainError("frame: sigma^2 not positive");
  return Quaternion::real(std::sqrt(s.w));
}
CQuaternion sqrt_scalar(const CQuaternion& s) { return sqrt_selfdagger(s); }

Quaternion embed_scalar(const Quaternion& x, const Quaternion&) { return x; }
CQuaternion embed_scalar(const Quaternion& x, const CQuaternion&) { return CQuaternion(x); }

Quaternion embed_basis(int mu, const Quaternion&) { return Quaternion::unit(mu); }
CQuaternion embed_basis(int mu, const CQuaternion&) { return CQuaternion(Quaternion::unit(mu)); }

template <class S>
void data_in_scalar(const AdhmData& d, QMatT<S>& t, QMatT<S>& p);

template <>
void data_in_scalar<Quaternion>(const AdhmData& d, QMatrix& t, QMatrix& p) {
  if (d.form != AdhmForm::Real)
    throw WrongForm("gauge: real-form pipeline invoked on complex data");
  t = d.t;
  p = d.p;
}
template <>
void data_in_scalar<CQuaternion>(const AdhmData& d, CQMatrix& t, CQMatrix& p) {
  t = d.tc;
  p = d.pc;
}

template <class S>
FrameT<S> build_frame_impl(const AdhmData& d, const Quaternion& x) {
  QMatT<S> t, p;
  data_in_scalar<S>(d, t, p);
  const int k = d.k;

  QMatT<S> xt = t;  // T - x
  for (int i = 0; i < k; ++i) xt(i, i) -= embed_scalar(x, S{});

  FrameT<S> fr;
  const QMatT<S> m = xt.adjoint();  // M = (T - x)^*
  fr.minv = inverse(m);
  fr.n = scale_left(S::real(-1.0), fr.minv * p);
  S s2 = (fr.n.adjoint() * fr.n)(0, 0);
  s2 += S::real(1.0);
  fr.sigma = sqrt_scalar(s2);
  fr.sigma_inv = inv_sqrt_scalar(s2);
  fr.v = QMatT<S>(k + 1, 1);
  for (int i = 0; i < k; ++i) fr.v(i, 0) = fr.n(i, 0) * fr.sigma_inv;
  fr.v(k, 0) = fr.sigma_inv;
  fr.f = inverse(m * m.adjoint() + p * p.adjoint());
  return fr;
}

// d_mu N = M^-1 e_mu^bar N, so A_mu = Im(N^* M^-1 e_mu^bar N) / sigma^2: the
// sigma-derivative terms are real and drop under Im.
std::array<Quaternion, 4> connection_analytic(const Frame& fr) {
  std::array<Quaternion, 4> a;
  const double inv_s2 = fr.sigma_inv.w * fr.sigma_inv.w;
  for (int mu = 0; mu < 4; ++mu) {
    const QMatrix dn = fr.minv * scale_left(Quaternion::unit(mu).conj(), fr.n);
    a[mu] = ((fr.n.adjoint() * dn)(0, 0)).im() * inv_s2;
  }
  return a;
}

constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

template <class S>
std::array<S, 6> curvature_sandwich(const FrameT<S>& fr, int k) {
  // u = top block of v; g_mn = u^* e_m F e_n^bar u; F_mn = g_mn - dagger(g_mn).
  QMatT<S> u(k, 1);
  for (int i = 0; i < k; ++i) u(i, 0) = fr.v(i, 0);
  std::array<QMatT<S>, 4> ft;  // F (e_nu^bar u)
  for (int nu = 0; nu < 4; ++nu) ft[nu] = fr.f * scale_left(dagger(embed_basis(nu, S{})), u);
  std::array<S, 6> f;
  for (int c = 0; c < 6; ++c) {
    const int m = kPairs[c][0], n = kPairs[c][1];
    S g{};
    for (int i = 0; i < k; ++i) g += dagger(u(i, 0)) * (embed_basis(m, S{}) * ft[n](i, 0));
    f[c] = g - dagger(g);
  }
  return f;
}

}  // namespace

Frame build_frame(const AdhmData& d, const Quaternion& x) {
  if (d.form != AdhmForm::Real) throw WrongForm("build_frame: expects real-form data");
  // M loses rank exactly at left eigenvalues of T.
  QMatrix xt = d.t;
  for (int i = 0; i < d.k; ++i) xt(i, i) -= x;
  if (smallest_singular_value(xt) < 1e-6 * (1.0 + d.t.frobenius_norm()))
    throw GaugeSingularity("build_frame: x is (numerically) a left eigenvalue of T");
  return build_frame_impl<Quaternion>(d, x);
}

CFrame build_frame_complex(const AdhmData& d, const Quaternion& x) {
  CQMatrix xt = d.tc;
  for (int i = 0; i < d.k; ++i) xt(i, i) -= CQuaternion(x);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(complex_rep(xt));
  if (svd.singularValues()(svd.singularValues().size() - 1) <
      1e-6 * (1.0 + d.tc.frobenius_norm()))
    throw GaugeSingularity("build_frame_complex: M is singular at x");
  return build_frame_impl<CQuaternion>(d, x);
}

Connection connection(const AdhmData& d, const Quaternion& x, DerivMode mode, double h) {
  Connection c;
  if (mode == DerivMode::Analytic) {
    c.a = connection_analytic(build_frame(d, x));
    return c;
  }
  if (h <= 0) h = 1e-4 * (1.0 + x.norm());
  const Frame at = build_frame(d, x);
  for (int mu = 0; mu < 4; ++mu) {
    const Quaternion e = Quaternion::unit(mu);
    const Frame fp = build_frame(d, x + h * e);
    const Frame fm = build_frame(d, x - h * e);
    Quaternion vdv{};
    for (int i = 0; i <= d.k; ++i)
      vdv += at.v(i, 0).conj() * ((fp.v(i, 0) - fm.v(i, 0)) * (0.5 / h));
    c.a[mu] = vdv.im();
  }
  return c;
}

double Curvature::norm() const {
  double s = 0;
  for (const Quaternion& q : f) s += q.norm_sq();
  return std::sqrt(s);
}

Curvature curvature(const AdhmData& d, const Quaternion& x, DerivMode mode, double h) {
  Curvature out;
  if (mode == DerivMode::Analytic) {
    out.f = curvature_sandwich(build_frame(d, x), d.k);
    return out;
  }
  if (h <= 0) h = 1e-4 * (1.0 + x.norm());
  std::array<std::array<Quaternion, 4>, 4> da;  // da[m][n] = d_m A_n
  for (int m = 0; m < 4; ++m) {
    const Quaternion e = Quaternion::unit(m);
    const Connection ap = connection(d, x + h * e);
    const Connection am = connection(d, x - h * e);
    for (int n = 0; n < 4; ++n) da[m][n] = (ap.a[n] - am.a[n]) * (0.5 / h);
  }
  const Connection a = connection(d, x);
  for (int c = 0; c < 6; ++c) {
    const int m = kPairs[c][0], n = kPairs[c][1];
    out.f[c] = da[m][n] - da[n][m] + a.a[m] * a.a[n] - a.a[n] * a.a[m];
  }
  return out;
}

std::array<CQuaternion, 6> curvature_complex(const AdhmData& d, const Quaternion& x) {
  return curvature_sandwich(build_frame_complex(d, x), d.k);
}

double asd_residual(const Curvature& fc) {
  const auto& f = fc.f;
  const double s = kOrientation;
  // Hodge pairs under the documented orientation: 01<->23, 02<->-13, 03<->12.
  const std::array<Quaternion, 6> star = {s * f[5], -s * f[4], s * f[3],
                                          s * f[2], -s * f[1], s * f[0]};
  double num = 0, den = 0;
  for (int c = 0; c < 6; ++c) {
    num += (f[c] + star[c]).norm_sq();
    den += f[c].norm_sq();
  }
  return std::sqrt(num / den);
}

double c2_density_from_curvature(const Curvature& fc) {
  const auto& f = fc.f;
  // Volume coefficient of (1/4pi^2) tr(F^F) with tr q = 2 Re q:
  // (1/pi^2) [Re(F01 F23) - Re(F02 F13) + Re(F03 F12)].
  const double raw = (f[0] * f[5]).w - (f[1] * f[4]).w + (f[2] * f[3]).w;
  return kChargeNormalization * raw / (pi * pi);
}

double c2_density(const AdhmData& d, const Quaternion& x) {
  return c2_density_from_curvature(curvature(d, x));
}

GaugeSample evaluate_sample(const AdhmData& d, const Quaternion& x) {
  GaugeSample s;
  s.x = x;
  const Frame fr = build_frame(d, x);
  for (int i = 0; i <= d.k; ++i) s.v.push_back(fr.v(i, 0));
  s.a = connection_analytic(fr);
  Curvature f;
  f.f = curvature_sandwich(fr, d.k);
  s.f = f.f;
  s.c2 = c2_density_from_curvature(f);
  return s;
}

IntegralResult charge(const AdhmData& d, R4QuadratureSpec spec) {
  if (d.form != AdhmForm::Real) throw WrongForm("charge: expects real-form data");
  if (spec.scale <= 0) {
    // Defaults from the datum: center at the mean diagonal of T; scale covering the
    // diagonal spread plus the width |P| sets both lump and shell sizes.
    Quaternion center{};
    for (int i = 0; i < d.k; ++i) center += d.t(i, i) * (1.0 / d.k);
    double spread = 0;
    for (int i = 0; i < d.k; ++i) spread = std::max(spread, (d.t(i, i) - center).norm());
    spec.center = center;
    spec.scale = spread + d.p.frobenius_norm() / std::sqrt(static_cast<double>(d.k)) + 0.1;
    if (d.k > 1) spec.scheme = QuadScheme::MonteCarloImportance;
  }
  if (spec.budget <= 0) spec.budget = d.k == 1 ? 300'000 : 2'000'000;

  const Quaternion jitter = 1e-5 * spec.scale * Quaternion{0.5, 0.5, 0.5, 0.5};
  ScalarField density = [&d, jitter](const Quaternion& x) {
    for (int attempt = 0; attempt < 5; ++attempt) {
      try {
        return c2_density(d, x + static_cast<double>(attempt) * jitter);
      } catch (const GaugeSingularity&) {
        continue;  // measure-zero set; step off it deterministically
      }
    }
    throw GaugeSingularity("charge: persistent singularity at a quadrature node");
  };
  return integrate_r4(density, spec);
}

Connection ClosedFormK1::connection(const Quaternion& x) const {
  const Quaternion xt = x - t0;
  const double r2 = xt.norm_sq(), d2 = rho * rho + r2;
  Connection c;
  for (int mu = 0; mu < 4; ++mu)
    c.a[mu] = (Quaternion::unit(mu).conj() * xt).im() * (-rho * rho / (r2 * d2));
  return c;
}

Curvature ClosedFormK1::curvature(const Quaternion& x) const {
  const Quaternion xt = x - t0;
  const double r2 = xt.norm_sq(), d2 = rho * rho + r2;
  const double pref = rho * rho / (r2 * d2 * d2);
  Curvature f;
  for (int c = 0; c < 6; ++c) {
    const Quaternion em = Quaternion::unit(kPairs[c][0]), en = Quaternion::unit(kPairs[c][1]);
    f.f[c] = (xt.conj() * (em * en.conj() - en * em.conj()) * xt) * pref;
  }
  return f;
}

double ClosedFormK1::c2(const Quaternion& x) const {
  const double d2 = rho * rho + (x - t0).norm_sq();
  const double d8 = d2 * d2 * d2 * d2;
  return 6.0 * rho * rho * rho * rho / (pi * pi * d8);
}

double ClosedFormK1::peak_density() const { return 6.0 / (pi * pi * rho * rho * rho * rho); }

}  // namespace instanton
