#include <doctest.h>

#include <cmath>
#include <numbers>

#include "instanton/errors.hpp"
#include "instanton/invariants.hpp"
#include "instanton/rng.hpp"

using namespace instanton;
using std::numbers::pi;

namespace {

SubmanifoldSpec make(SubmanifoldKind kind, double r, int order = 16) {
  SubmanifoldSpec s;
  s.kind = kind;
  s.radius = r;
  s.order = order;
  return s;
}

// The linked circle/sphere2 pair used throughout: circle of radius 0.6 in the
// (x1,x4)-plane centered at (0.8,0,0,0), unit sphere2 in the x4 = 0 slice.
std::pair<SubmanifoldSpec, SubmanifoldSpec> hopf_pair() {
  SubmanifoldSpec c = make(SubmanifoldKind::Circle, 0.6, 20);
  Eigen::Matrix4d rot = Eigen::Matrix4d::Zero();
  rot(0, 0) = 1;
  rot(3, 1) = 1;
  rot(2, 2) = 1;
  rot(1, 3) = -1;
  c.frame.rotation = rot;
  c.frame.offset = Quaternion{0.8, 0, 0, 0};
  SubmanifoldSpec s2 = make(SubmanifoldKind::Sphere2, 1.0, 20);
  return {c, s2};
}

Eigen::Matrix4d random_rotation(Rng& rng) {
  Eigen::Matrix4d g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::Matrix4d> qr(g);
  Eigen::Matrix4d q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

SubmanifoldSpec moved(const SubmanifoldSpec& s, const Eigen::Matrix4d& rot, const Quaternion& off) {
  SubmanifoldSpec out = s;
  out.frame.rotation = rot * s.frame.rotation;
  const Quaternion ro = [&] {
    Eigen::Vector4d v(s.frame.offset.w, s.frame.offset.x, s.frame.offset.y, s.frame.offset.z);
    Eigen::Vector4d w = rot * v;
    return Quaternion{w[0], w[1], w[2], w[3]};
  }();
  out.frame.offset = ro + off;
  return out;
}

}  // namespace

TEST_CASE("linking numbers of the standard configurations") {
  const SubmanifoldSpec s3 = make(SubmanifoldKind::Sphere3, 1.0, 16);
  SubmanifoldSpec inside = make(SubmanifoldKind::Point, 1.0);
  const LinkingResult in = gauss_link(inside, s3);
  CHECK(in.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(in.nearest_integer == 1);
  CHECK(in.error < 1e-8);

  SubmanifoldSpec outside = inside;
  outside.frame.offset = Quaternion{3.0, 0, 0, 0};
  const LinkingResult out = gauss_link(outside, s3);
  CHECK(std::abs(out.value) < 1e-8);
  CHECK(out.nearest_integer == 0);

  const auto [c, s2] = hopf_pair();
  const LinkingResult link = gauss_link(c, s2);
  CHECK(link.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(link.nearest_integer == 1);

  // both dimension splits are symmetric under swapping the arguments
  CHECK(gauss_link(s3, inside).value == doctest::Approx(in.value).epsilon(1e-10));
  CHECK(gauss_link(s2, c).value == doctest::Approx(link.value).epsilon(1e-10));
}

TEST_CASE("linking is isometry invariant and flips under reflection") {
  const auto [c, s2] = hopf_pair();
  const double base = gauss_link(c, s2).value;
  Rng rng(19);
  const Eigen::Matrix4d rot = random_rotation(rng);
  const Quaternion off{0.3, -1.0, 0.4, 2.2};
  CHECK(gauss_link(moved(c, rot, off), moved(s2, rot, off)).value ==
        doctest::Approx(base).epsilon(1e-9));

  Eigen::Matrix4d mirror = Eigen::Matrix4d::Identity();
  mirror(3, 3) = -1.0;
  CHECK(gauss_link(moved(c, mirror, {}), moved(s2, mirror, {})).value ==
        doctest::Approx(-base).epsilon(1e-9));
}

TEST_CASE("linking rejects bad configurations") {
  const SubmanifoldSpec pt = make(SubmanifoldKind::Point, 1.0);
  CHECK_THROWS_AS(gauss_link(pt, make(SubmanifoldKind::Sphere2, 1.0)), DimensionMismatch);
  // The disjointness guard is sampled, so build an actual node collision: drop a
  // circle whose first quadrature node lands on a sampled node of the sphere.
  const SubmanifoldSpec s2 = make(SubmanifoldKind::Sphere2, 1.0);
  SubmanifoldSpec touching = make(SubmanifoldKind::Circle, 1.0);
  touching.frame.offset = surface_quadrature(s2, 10).front().x - Quaternion{1.0, 0, 0, 0};
  CHECK_THROWS_AS(gauss_link(touching, s2), NotDisjoint);
}

TEST_CASE("total-space form: spatial restriction has unit mass") {
  const K1Modulus m{Quaternion{0.3, -0.1, 0.2, 0.0}, 0.6};
  const TotalVector e[4] = {{Quaternion::unit(0), {}, 0},
                            {Quaternion::unit(1), {}, 0},
                            {Quaternion::unit(2), {}, 0},
                            {Quaternion::unit(3), {}, 0}};
  const ScalarField g4 = [&](const Quaternion& x) {
    return total_form_k1(m, x, std::span<const TotalVector>(e, 4));
  };
  R4QuadratureSpec spec;
  spec.center = m.t;
  spec.scale = m.rho;
  spec.budget = 150'000;
  CHECK(integrate_r4(g4, spec).value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("total-space form is closed (finite differences)") {
  // dc(e_{d0},..,e_{d4}) = sum_i (-1)^i d_{d_i} c(e_{others}) over coordinate
  // directions 0..3 = x, 4..7 = t, 8 = rho; every 5-subset must give ~0.
  const double h = 1e-3;
  const Quaternion x0{0.4, 0.1, -0.3, 0.2};
  const K1Modulus m0{Quaternion{-0.1, 0.2, 0.0, 0.1}, 0.9};

  auto tv = [](int dir) {
    TotalVector v{};
    if (dir < 4) v.dx = Quaternion::unit(dir);
    else if (dir < 8) v.dt = Quaternion::unit(dir - 4);
    else v.drho = 1.0;
    return v;
  };
  auto shifted = [&](int dir, double step, Quaternion& x, K1Modulus& m) {
    x = x0;
    m = m0;
    if (dir < 4) x += step * Quaternion::unit(dir);
    else if (dir < 8) m.t += step * Quaternion::unit(dir - 4);
    else m.rho += step;
  };
  auto c_at = [&](int dir, double step, const std::array<int, 4>& slots) {
    Quaternion x;
    K1Modulus m;
    shifted(dir, step, x, m);
    std::array<TotalVector, 4> v{tv(slots[0]), tv(slots[1]), tv(slots[2]), tv(slots[3])};
    return total_form_k1(m, x, v);
  };

  int subset[5];
  for (subset[0] = 0; subset[0] < 9; ++subset[0])
    for (subset[1] = subset[0] + 1; subset[1] < 9; ++subset[1])
      for (subset[2] = subset[1] + 1; subset[2] < 9; ++subset[2])
        for (subset[3] = subset[2] + 1; subset[3] < 9; ++subset[3])
          for (subset[4] = subset[3] + 1; subset[4] < 9; ++subset[4]) {
            double dc = 0.0;
            double sign = 1.0;
            for (int i = 0; i < 5; ++i, sign = -sign) {
              std::array<int, 4> slots;
              for (int j = 0, c = 0; j < 5; ++j)
                if (j != i) slots[c++] = subset[j];
              const double plus = c_at(subset[i], h, slots);
              const double minus = c_at(subset[i], -h, slots);
              dc += sign * (plus - minus) / (2 * h);
            }
            CHECK(std::abs(dc) < 5e-5);
          }
}

TEST_CASE("induced moduli form on a centered 3-sphere") {
  // frozen oracle: mu(S^3 of radius R centered at t)(d/drho) = 12 rho^3 R^4 / D^8,
  // D^2 = rho^2 + R^2.  The translation components vanish by symmetry.
  for (double R : {0.7, 1.0, 1.6}) {
    for (double rho : {0.3, 0.8, 1.4}) {
      const K1Modulus m{Quaternion{0.2, -0.4, 0.1, 0.3}, rho};
      SubmanifoldSpec s3 = make(SubmanifoldKind::Sphere3, R, 20);
      s3.frame.offset = m.t;
      const double delta2 = rho * rho + R * R;
      const double expected = 12 * std::pow(rho, 3) * std::pow(R, 4) / std::pow(delta2, 4);

      const ModuliVector drho{Quaternion{}, 1.0};
      CHECK(mu_form_k1(s3, m, std::span<const ModuliVector>(&drho, 1)) ==
            doctest::Approx(expected).epsilon(1e-8));
      for (int j = 0; j < 4; ++j) {
        const ModuliVector dt{Quaternion::unit(j), 0.0};
        CHECK(std::abs(mu_form_k1(s3, m, std::span<const ModuliVector>(&dt, 1))) <
              1e-10 * (1.0 + expected));
      }
    }
  }
}

TEST_CASE("radial charge profile matches the closed form") {
  // ball mass Q(R) = int_{|x|<=R} 6 rho^4 / (pi^2 (rho^2+r^2)^4) = 1 - 3w^2 + 2w^3
  // with w = rho^2/(rho^2+R^2); equivalently 2 pi^2 R^4 f(R) for the profile
  // f(r) = (r^2 + 3 rho^2) / (2 pi^2 (rho^2+r^2)^3).  Simpson in r is plenty.
  for (double rho : {0.4, 1.0}) {
    for (double R : {0.5, 1.3, 3.0}) {
      const int n = 4000;
      const double hstep = R / n;
      double acc = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double r = i * hstep;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double u = rho * rho + r * r;
        acc += w * 2 * pi * pi * r * r * r * 6 * std::pow(rho, 4) / (pi * pi * std::pow(u, 4));
      }
      acc *= hstep / 3.0;
      const double w = rho * rho / (rho * rho + R * R);
      const double closed = 1.0 - 3 * w * w + 2 * w * w * w;
      const double via_f = 2 * pi * pi * std::pow(R, 4) * (R * R + 3 * rho * rho) /
                           (2 * pi * pi * std::pow(rho * rho + R * R, 3));
      CHECK(acc == doctest::Approx(closed).epsilon(1e-10));
      CHECK(via_f == doctest::Approx(closed).epsilon(1e-12));
    }
  }
}

TEST_CASE("moduli component bookkeeping") {
  CHECK(moduli_subsets(0).size() == 1);
  CHECK(moduli_subsets(1).size() == 5);
  CHECK(moduli_subsets(2).size() == 10);
  CHECK(moduli_subsets(4).size() == 5);
  const auto pairs = moduli_subsets(2);
  CHECK(pairs.front() == std::vector<int>{0, 1});
  CHECK(pairs.back() == std::vector<int>{3, 4});

  // mu_form_components must agree with slotwise mu_form_k1 on a sphere2
  SubmanifoldSpec s2 = make(SubmanifoldKind::Sphere2, 1.1, 14);
  s2.frame.offset = Quaternion{0.3, 0.2, -0.1, 0.4};
  const K1Modulus m{Quaternion{0.1, 0.0, 0.2, -0.3}, 0.8};
  const auto comps = mu_form_components(s2, m);
  REQUIRE(comps.size() == pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    ModuliVector w[2];
    for (int s = 0; s < 2; ++s) {
      const int idx = pairs[i][s];
      if (idx < 4) w[s] = ModuliVector{Quaternion::unit(idx), 0.0};
      else w[s] = ModuliVector{Quaternion{}, 1.0};
    }
    CHECK(comps[i] == doctest::Approx(mu_form_k1(s2, m, w)).epsilon(1e-12));
  }
}

TEST_CASE("delta-family masses") {
  // n = 4: mass -> (pi^2/6) f(center)
  const Quaternion c{0.5, -0.2, 0.1, 0.0};
  const ScalarField f = [&](const Quaternion& x) { return std::exp(-0.7 * (x - c).norm_sq()); };
  const IntegralResult m4 = delta_family_mass(4, 0.01, f, c);
  CHECK(m4.value == doctest::Approx(pi * pi / 6.0).epsilon(1e-2));

  // f = 1, any rho: exactly pi^2/6 (scale invariance), so the calibrated kernel
  // has unit mass
  const IntegralResult flat = delta_family_mass(4, 0.37, nullptr, c);
  CHECK(flat.value * 6.0 / (pi * pi) == doctest::Approx(1.0).epsilon(1e-8));

  // n = 3, f = 1: exact mass pi^2 rho^2 / 2 -> 0
  const double rho = 0.05;
  const IntegralResult m3 = delta_family_mass(3, rho, nullptr, c);
  CHECK(m3.value == doctest::Approx(pi * pi * rho * rho / 2.0).epsilon(1e-6));

  // n = 2 against a decaying f: vanishes with rho
  const IntegralResult m2a = delta_family_mass(2, 0.1, f, c);
  const IntegralResult m2b = delta_family_mass(2, 0.02, f, c);
  CHECK(std::abs(m2b.value) < std::abs(m2a.value));
  CHECK(std::abs(m2b.value) < 5e-3);
}

TEST_CASE("don1 smoke: deterministic, correctly shaped, near the link") {
  SubmanifoldSpec pt = make(SubmanifoldKind::Point, 1.0);
  SubmanifoldSpec s3 = make(SubmanifoldKind::Sphere3, 1.5, 12);
  Don1Options opt;
  opt.samples = 20'000;
  opt.seed = 7;
  const Don1Result r = don1({pt, s3}, opt);
  CHECK(r.epsilons.size() == 3);
  CHECK(r.at_epsilon.size() == 3);
  CHECK(r.mc_error.size() == 3);
  CHECK(std::abs(r.value - 1.0) < 0.25);  // the anomaly at charge 1: C * link with C = 1

  const Don1Result again = don1({pt, s3}, opt);
  CHECK(r.value == again.value);
  CHECK(r.error == again.error);

  // dimension budget: each extra factor buys 4 more dimensions minus the 5 moduli
  CHECK_THROWS_AS(don1({s3, s3}, opt), DimensionBudgetViolated);
}
