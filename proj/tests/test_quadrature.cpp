#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "instanton/quadrature.hpp"

using namespace instanton;
using std::numbers::pi;

TEST_CASE("gaussian integral over R^4") {
  // int exp(-|x|^2) = pi^2, the standard desk oracle
  const ScalarField f = [](const Quaternion& x) { return std::exp(-x.norm_sq()); };
  for (QuadScheme scheme : {QuadScheme::RadialSpherical, QuadScheme::SparseGrid}) {
    R4QuadratureSpec spec;
    spec.scheme = scheme;
    spec.budget = 200'000;
    const IntegralResult r = integrate_r4(f, spec);
    CHECK(r.value == doctest::Approx(pi * pi).epsilon(1e-5));
    CHECK(r.nodes <= spec.budget);
  }
}

TEST_CASE("lump family mass, off-center and scaled") {
  // int rho^4/(rho^2+|x-c|^2)^4 = pi^2/6 for every center and width
  const Quaternion c{0.4, -1.2, 0.3, 2.0};
  const double rho = 0.35;
  const ScalarField f = [&](const Quaternion& x) {
    const double d2 = (x - c).norm_sq();
    const double u = rho * rho + d2;
    return rho * rho * rho * rho / (u * u * u * u);
  };
  R4QuadratureSpec spec;
  spec.center = c;
  spec.scale = rho;
  spec.budget = 100'000;
  const IntegralResult r = integrate_r4(f, spec);
  CHECK(r.value == doctest::Approx(pi * pi / 6.0).epsilon(1e-8));
  // a mismatched scale still converges, just slower
  spec.scale = 1.0;
  spec.budget = 400'000;
  CHECK(integrate_r4(f, spec).value == doctest::Approx(pi * pi / 6.0).epsilon(1e-4));
}

TEST_CASE("monte carlo scheme agrees and reports a sane error") {
  const Quaternion c{0.1, 0.0, -0.2, 0.0};
  const ScalarField f = [&](const Quaternion& x) { return std::exp(-(x - c).norm_sq()); };
  R4QuadratureSpec spec;
  spec.scheme = QuadScheme::MonteCarloImportance;
  spec.center = c;
  spec.budget = 300'000;
  spec.seed = 99;
  const IntegralResult r = integrate_r4(f, spec);
  CHECK(std::abs(r.value - pi * pi) < 5 * r.error + 1e-9);
  CHECK(r.error < 0.05);

  // deterministic for a fixed seed regardless of thread count
  const IntegralResult r2 = integrate_r4(f, spec);
  CHECK(r.value == r2.value);
}

TEST_CASE("monte carlo reduction is independent of the thread count") {
  const ScalarField f = [](const Quaternion& x) { return std::exp(-x.norm_sq()); };
  R4QuadratureSpec spec;
  spec.scheme = QuadScheme::MonteCarloImportance;
  spec.budget = 100'000;
  spec.seed = 5;

  setenv("INSTANTON_THREADS", "1", 1);
  const double serial = integrate_r4(f, spec).value;
  setenv("INSTANTON_THREADS", "7", 1);
  const double parallel = integrate_r4(f, spec).value;
  unsetenv("INSTANTON_THREADS");
  CHECK(serial == parallel);
}

TEST_CASE("polynomial-times-gaussian moments") {
  // int x1^2 exp(-|x|^2) = pi^2/2
  const ScalarField f = [](const Quaternion& x) { return x.w * x.w * std::exp(-x.norm_sq()); };
  R4QuadratureSpec spec;
  spec.budget = 200'000;
  CHECK(integrate_r4(f, spec).value == doctest::Approx(pi * pi / 2.0).epsilon(1e-6));
}
