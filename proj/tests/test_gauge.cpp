#include <doctest.h>

#include <cmath>
#include <numbers>

#include "instanton/errors.hpp"
#include "instanton/gauge.hpp"
#include "instanton/rng.hpp"

using namespace instanton;
using std::numbers::pi;

namespace {

Quaternion random_point(Rng& rng, double spread = 1.5) {
  return {spread * rng.normal(), spread * rng.normal(), spread * rng.normal(), spread * rng.normal()};
}

// A probe point where the frame exists (resample past the singular locus).
Quaternion safe_point(const AdhmData& d, Rng& rng, double spread = 1.5) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Quaternion x = random_point(rng, spread);
    try {
      build_frame(d, x);
      return x;
    } catch (const GaugeSingularity&) {
    }
  }
  throw std::runtime_error("no safe probe point found");
}

double qdiff(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

}  // namespace

TEST_CASE("frame solves the null-space problem") {
  Rng rng(11);
  for (int k : {1, 2, 3}) {
    AdhmData d = sample_adhm(k, rng);
    for (int trial = 0; trial < 10; ++trial) {
      const Quaternion x = safe_point(d, rng);
      const Frame fr = build_frame(d, x);

      // v^* v = 1
      const QMatrix vv = fr.v.adjoint() * fr.v;
      CHECK(qdiff(vv(0, 0), Quaternion::real(1.0)) < 1e-12);

      // R_x v = 0 with R_x = [(T - x)^* | P]:  M n + p must vanish against sigma
      QMatrix m = d.t;
      for (int i = 0; i < k; ++i) m(i, i) = m(i, i) - x;
      m = m.adjoint();
      const QMatrix resid = m * fr.n + d.p;
      CHECK(resid.frobenius_norm() < 1e-10 * (1.0 + d.norm()));

      // f is the Green operator: f (M M^* + P P^*) = Id
      const QMatrix mm = m * m.adjoint() + d.p * d.p.adjoint();
      const QMatrix should_be_id = fr.f * mm;
      CHECK((should_be_id - QMatrix::identity(k)).frobenius_norm() < 1e-10 * (1.0 + mm.frobenius_norm()));
    }
  }
}

TEST_CASE("analytic connection matches finite differences") {
  Rng rng(23);
  for (int k : {1, 2}) {
    AdhmData d = sample_adhm(k, rng);
    for (int trial = 0; trial < 8; ++trial) {
      const Quaternion x = safe_point(d, rng);
      const Connection ca = connection(d, x, DerivMode::Analytic);
      const Connection cf = connection(d, x, DerivMode::FiniteDifference);
      for (int mu = 0; mu < 4; ++mu) {
        CHECK(qdiff(ca.a[mu], cf.a[mu]) < 1e-5);
        CHECK(std::abs(ca.a[mu].re()) < 1e-12);  // Im-valued in the unitary gauge
      }
    }
  }
}

TEST_CASE("curvature is anti-self-dual") {
  Rng rng(37);
  for (int k : {1, 2, 3}) {
    AdhmData d = sample_adhm(k, rng);
    for (int trial = 0; trial < 8; ++trial) {
      const Quaternion x = safe_point(d, rng);
      const Curvature fa = curvature(d, x, DerivMode::Analytic);
      CHECK(asd_residual(fa) < 1e-10);
      const Curvature ff = curvature(d, x, DerivMode::FiniteDifference);
      CHECK(asd_residual(ff) < 1e-4);
      double diff = 0.0, scale = 0.0;
      for (int c = 0; c < 6; ++c) {
        diff += qdiff(fa.f[c], ff.f[c]);
        scale += fa.f[c].norm();
      }
      CHECK(diff < 1e-4 * (1.0 + scale));
    }
  }
}

TEST_CASE("complex-form pipeline reproduces the real one on the real locus") {
  Rng rng(41);
  AdhmData d = sample_adhm(2, rng);
  AdhmData dc = real_complex_convert(d);
  REQUIRE(dc.form == AdhmForm::Complex);
  for (int trial = 0; trial < 6; ++trial) {
    const Quaternion x = safe_point(d, rng);
    const Curvature fr = curvature(d, x);
    const auto fc = curvature_complex(dc, x);
    for (int c = 0; c < 6; ++c) {
      CHECK(qdiff(fr.f[c], fc[c].re) < 1e-10);
      CHECK(fc[c].im.norm() < 1e-10);
    }
  }
}

TEST_CASE("charge-1 closed forms are the pipeline restricted to k = 1") {
  const Quaternion t0{0.3, -0.2, 0.5, 0.1};
  const double rho = 0.8;
  const AdhmData d = AdhmData::k1(t0, rho);
  const ClosedFormK1 cf{t0, rho};
  Rng rng(53);
  for (int trial = 0; trial < 25; ++trial) {
    const Quaternion x = t0 + random_point(rng, 1.2 * rho);
    if ((x - t0).norm() < 1e-3) continue;
    const Connection ca = connection(d, x);
    const Connection cc = cf.connection(x);
    for (int mu = 0; mu < 4; ++mu) CHECK(qdiff(ca.a[mu], cc.a[mu]) < 1e-10 * (1.0 + cc.a[mu].norm()));
    const Curvature fa = curvature(d, x);
    const Curvature fcf = cf.curvature(x);
    for (int c = 0; c < 6; ++c) CHECK(qdiff(fa.f[c], fcf.f[c]) < 1e-10 * (1.0 + fcf.f[c].norm()));
    const double dens = c2_density(d, x);
    CHECK(dens == doctest::Approx(cf.c2(x)).epsilon(1e-10));
    // explicit profile: 6 rho^4 / (pi^2 (rho^2 + |x-t0|^2)^4)
    const double delta2 = rho * rho + (x - t0).norm_sq();
    CHECK(cf.c2(x) == doctest::Approx(6 * std::pow(rho, 4) / (pi * pi * std::pow(delta2, 4))));
  }
  CHECK(cf.peak_density() == doctest::Approx(6.0 / (pi * pi * std::pow(rho, 4))));
  CHECK(cf.c2(t0) == doctest::Approx(cf.peak_density()));
}

TEST_CASE("density from curvature matches the direct density") {
  Rng rng(61);
  AdhmData d = sample_adhm(2, rng);
  for (int trial = 0; trial < 10; ++trial) {
    const Quaternion x = safe_point(d, rng);
    const Curvature f = curvature(d, x);
    CHECK(c2_density(d, x) == doctest::Approx(c2_density_from_curvature(f)).epsilon(1e-12));
    CHECK(f.norm() > 0.0);
  }
}

TEST_CASE("charge integrates to k") {
  // k = 1: radial-spherical around the center is essentially exact
  const AdhmData d1 = AdhmData::k1({0.2, -0.1, 0.3, 0.0}, 0.7);
  const IntegralResult q1 = charge(d1);
  CHECK(q1.value == doctest::Approx(1.0).epsilon(1e-6));

  // k = 2: handcrafted exact datum (diagonal real T, real P solves the moment
  // condition identically), Monte Carlo defaults
  QMatrix t(2, 2), p(2, 1);
  t(0, 0) = Quaternion::real(0.5);
  t(1, 1) = Quaternion::real(-0.4);
  p(0, 0) = Quaternion::real(1.0);
  p(1, 0) = Quaternion::real(0.8);
  const AdhmData d2 = AdhmData::make_real(t, p);
  REQUIRE(check_adhm(d2));
  R4QuadratureSpec spec;
  spec.scheme = QuadScheme::MonteCarloImportance;
  spec.scale = 0.0;  // pick defaults
  spec.budget = 150'000;
  spec.seed = 2;
  const IntegralResult q2 = charge(d2, spec);
  CHECK(std::abs(q2.value - 2.0) < 0.05);
  CHECK(std::abs(q2.value - 2.0) < 6 * q2.error + 1e-3);
}

TEST_CASE("evaluate_sample bundles the pointwise pipeline") {
  const AdhmData d = AdhmData::k1({0.0, 0.0, 0.0, 0.0}, 1.0);
  const Quaternion x{0.4, 0.3, -0.2, 0.1};
  const GaugeSample s = evaluate_sample(d, x);
  CHECK(s.x == x);
  REQUIRE(s.v.size() == 2);
  const Frame fr = build_frame(d, x);
  CHECK(qdiff(s.v[0], fr.v(0, 0)) == 0.0);
  CHECK(qdiff(s.v[1], fr.v(1, 0)) == 0.0);
  const Connection a = connection(d, x);
  for (int mu = 0; mu < 4; ++mu) CHECK(qdiff(s.a[mu], a.a[mu]) == 0.0);
  CHECK(s.c2 == c2_density(d, x));
}

TEST_CASE("frame failure modes") {
  // x on a left eigenvalue of T: rank loss
  const Quaternion t0{0.3, 0.1, 0.0, 0.0};
  const AdhmData d = AdhmData::k1(t0, 0.5);
  CHECK_THROWS_AS(build_frame(d, t0), GaugeSingularity);

  // wrong-form dispatch
  Rng rng(71);
  AdhmData dc = real_complex_convert(sample_adhm(1, rng));
  CHECK_THROWS_AS(build_frame(dc, Quaternion{2.0, 0.0, 0.0, 0.0}), WrongForm);
}
