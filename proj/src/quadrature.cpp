#include "instanton/quadrature.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <future>
#include <numbers>
#include <thread>
#include <vector>

#include "instanton/errors.hpp"
#include "instanton/rng.hpp"
#include "instanton/summation.hpp"
#include "quad_rules.hpp"

namespace instanton {

namespace {

using std::numbers::pi;
using rules::Rule1d;
using rules::gauss_legendre;
using rules::gauss_legendre_on;

// Unit S^3 product rule: psi, theta in (0, pi), phi periodic; weights include the
// sin^2(psi) sin(theta) measure.  Node count n_psi * n_theta * n_phi.
struct S3Rule {
  std::vector<Quaternion> dir;
  std::vector<double> w;
};

S3Rule s3_rule(int n_psi, int n_theta, int n_phi) {
  S3Rule s;
  const Rule1d psi = gauss_legendre_on(n_psi, 0, pi);
  const Rule1d u = gauss_legendre(n_theta);  // u = cos(theta)
  for (int a = 0; a < n_psi; ++a) {
    const double sp = std::sin(psi.x[a]), cp = std::cos(psi.x[a]);
    for (int b = 0; b < n_theta; ++b) {
      const double ct = u.x[b], st = std::sqrt(1 - ct * ct);
      for (int c = 0; c < n_phi; ++c) {
        const double phi = 2 * pi * c / n_phi;
        s.dir.push_back({cp, sp * ct, sp * st * std::cos(phi), sp * st * std::sin(phi)});
        s.w.push_back(psi.w[a] * sp * sp * u.w[b] * (2 * pi / n_phi));
      }
    }
  }
  return s;
}

IntegralResult radial_spherical_pass(const ScalarField& f, const R4QuadratureSpec& spec,
                                     int n_r, int n_psi, int n_theta, int n_phi) {
  const Rule1d th = gauss_legendre_on(n_r, 0, pi);
  const S3Rule s3 = s3_rule(n_psi, n_theta, n_phi);
  const size_t per_shell = s3.dir.size();
  std::vector<double> contrib(static_cast<size_t>(n_r) * per_shell);

  const int threads = worker_threads();
  std::vector<std::future<void>> fut;
  std::atomic<int> next_shell{0};
  auto work = [&] {
    for (;;) {
      const int i = next_shell.fetch_add(1);
      if (i >= n_r) return;
      const double theta = th.x[i];
      const double r = spec.scale * std::tan(0.5 * theta);
      const double sec = 1.0 / std::cos(0.5 * theta);
      const double jac = th.w[i] * r * r * r * 0.5 * spec.scale * sec * sec;
      for (size_t j = 0; j < per_shell; ++j) {
        const Quaternion x = spec.center + r * s3.dir[j];
        contrib[i * per_shell + j] = jac * s3.w[j] * f(x);
      }
    }
  };
  for (int t = 1; t < threads; ++t) fut.push_back(std::async(std::launch::async, work));
  work();
  for (auto& ft : fut) ft.get();

  IntegralResult res;
  res.value = pairwise_sum(contrib);
  res.nodes = static_cast<int64_t>(contrib.size());
  return res;
}

IntegralResult integrate_radial_spherical(const ScalarField& f, const R4QuadratureSpec& spec) {
  // Split the budget over a fine pass and an embedded half-order pass whose
  // difference estimates the error.
  const double fine_budget = 0.94 * static_cast<double>(spec.budget);
  // Node proportions r : psi : theta : phi = 2 : 1 : 1 : 2.
  const double base = std::pow(fine_budget / 4.0, 0.25);
  const int n_psi = std::max(4, static_cast<int>(base));
  const int n_theta = n_psi;
  const int n_phi = 2 * n_psi;
  const int n_r = std::max(6, static_cast<int>(fine_budget / (static_cast<double>(n_psi) * n_theta * n_phi)));

  IntegralResult fine = radial_spherical_pass(f, spec, n_r, n_psi, n_theta, n_phi);
  IntegralResult coarse = radial_spherical_pass(f, spec, std::max(4, n_r / 2),
                                                std::max(3, n_psi / 2), std::max(3, n_theta / 2),
                                                std::max(6, n_phi / 2));
  fine.error = std::abs(fine.value - coarse.value);
  fine.nodes += coarse.nodes;
  return fine;
}

// Importance density: the normalized charge-1 lump profile q(x) =
// (6/pi^2) s^4 / (s^2 + r^2)^4, sampled by inverting the radial CDF
// 1 - 3w^2 + 2w^3 with w = s^2/(s^2 + r^2).
double lump_radius_from_uniform(double xi, double s) {
  double w = 0.5;
  for (int it = 0; it < 80; ++it) {
    const double g = 2 * w * w * w - 3 * w * w + 1 - xi;
    const double dg = 6 * w * (w - 1);
    double step = g / dg;
    if (!std::isfinite(step)) break;
    w -= step;
    w = std::clamp(w, 1e-17, 1.0);
    if (std::abs(step) < 1e-15) break;
  }
  return s * std::sqrt(std::max(0.0, 1.0 / w - 1.0));
}

IntegralResult integrate_mc(const ScalarField& f, const R4QuadratureSpec& spec) {
  constexpr int kChunks = 64;
  const int64_t n = std::max<int64_t>(spec.budget, kChunks);
  const double s = spec.scale;
  const double qnorm = 6.0 / (pi * pi);

  std::vector<double> chunk_mean(kChunks), chunk_n(kChunks);
  const int threads = worker_threads();
  std::vector<std::future<void>> fut;
  std::atomic<int> next{0};
  auto work = [&] {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= kChunks) return;
      Rng rng = Rng(spec.seed).fork(static_cast<uint64_t>(c));
      const int64_t m = n / kChunks + (c < n % kChunks ? 1 : 0);
      std::vector<double> vals(static_cast<size_t>(m));
      for (int64_t i = 0; i < m; ++i) {
        const double r = lump_radius_from_uniform(rng.uniform(), s);
        const Quaternion x = spec.center + r * rng.unit_quaternion();
        const double s2r2 = s * s + r * r;
        const double q = qnorm * s * s * s * s / (s2r2 * s2r2 * s2r2 * s2r2);
        vals[static_cast<size_t>(i)] = f(x) / q;
      }
      chunk_mean[c] = m > 0 ? pairwise_sum(vals) / static_cast<double>(m) : 0.0;
      chunk_n[c] = static_cast<double>(m);
    }
  };
  for (int t = 1; t < threads; ++t) fut.push_back(std::async(std::launch::async, work));
  work();
  for (auto& ft : fut) ft.get();

  IntegralResult res;
  double wsum = 0;
  std::vector<double> weighted(kChunks);
  for (int c = 0; c < kChunks; ++c) {
    weighted[c] = chunk_mean[c] * chunk_n[c];
    wsum += chunk_n[c];
  }
  res.value = pairwise_sum(weighted) / wsum;
  double var = 0;
  for (int c = 0; c < kChunks; ++c) {
    const double d = chunk_mean[c] - res.value;
    var += d * d;
  }
  res.error = std::sqrt(var / (kChunks * (kChunks - 1.0)));
  res.nodes = n;
  return res;
}

// --- Smolyak sparse grid with nested Clenshaw-Curtis rules ---------------------

// CC rule with m_l points on [0,1]: m_1 = 1 (midpoint), m_l = 2^(l-1) + 1.
Rule1d cc_rule(int level) {
  Rule1d r;
  if (level == 1) {
    r.x = {0.5};
    r.w = {1.0};
    return r;
  }
  const int n = (1 << (level - 1)) + 1;
  const int big_n = n - 1;
  r.x.resize(n);
  r.w.resize(n);
  for (int j = 0; j <= big_n; ++j) {
    const double theta = pi * j / big_n;
    r.x[j] = 0.5 * (1 - std::cos(theta));
    double sum = 0;
    for (int m = 1; m <= big_n / 2; ++m) {
      const double b = (m == big_n / 2) ? 1.0 : 2.0;
      sum += b * std::cos(2 * m * theta) / (4.0 * m * m - 1.0);
    }
    const double c = (j == 0 || j == big_n) ? 1.0 : 2.0;
    r.w[j] = 0.5 * (c / big_n) * (1.0 - sum);  // halves: weights for [0,1]
  }
  return r;
}

int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  int64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// One Smolyak pass at level q (q >= 4 in 4 dims), over a [0,1]^4-parametrized
// integrand.
double smolyak_pass(const std::function<double(const std::array<double, 4>&)>& g, int q,
                    int64_t* nodes) {
  std::vector<double> terms;
  std::array<int, 4> l{};
  for (l[0] = 1; l[0] <= q - 3; ++l[0])
    for (l[1] = 1; l[1] + l[0] <= q - 2; ++l[1])
      for (l[2] = 1; l[2] + l[1] + l[0] <= q - 1; ++l[2])
        for (l[3] = 1; l[3] + l[2] + l[1] + l[0] <= q; ++l[3]) {
          const int norm = l[0] + l[1] + l[2] + l[3];
          if (norm < q - 3) continue;
          const double coeff =
              ((q - norm) % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(binom(3, q - norm));
          std::array<Rule1d, 4> rule{cc_rule(l[0]), cc_rule(l[1]), cc_rule(l[2]), cc_rule(l[3])};
          std::vector<double> vals;
          vals.reserve(rule[0].x.size() * rule[1].x.size() * rule[2].x.size() * rule[3].x.size());
          std::array<double, 4> t{};
          for (size_t i0 = 0; i0 < rule[0].x.size(); ++i0)
            for (size_t i1 = 0; i1 < rule[1].x.size(); ++i1)
              for (size_t i2 = 0; i2 < rule[2].x.size(); ++i2)
                for (size_t i3 = 0; i3 < rule[3].x.size(); ++i3) {
                  t = {rule[0].x[i0], rule[1].x[i1], rule[2].x[i2], rule[3].x[i3]};
                  vals.push_back(rule[0].w[i0] * rule[1].w[i1] * rule[2].w[i2] * rule[3].w[i3] *
                                 g(t));
                }
          *nodes += static_cast<int64_t>(vals.size());
          terms.push_back(coeff * pairwise_sum(vals));
        }
  return pairwise_sum(terms);
}

IntegralResult integrate_sparse(const ScalarField& f, const R4QuadratureSpec& spec) {
  // Parametrize (theta_r, psi, u = cos theta, phi) over [0,1]^4.
  auto g = [&](const std::array<double, 4>& t) -> double {
    const double theta = pi * t[0];
    const double r = spec.scale * std::tan(0.5 * theta);
    if (!std::isfinite(r)) return 0.0;
    const double sec = 1.0 / std::cos(0.5 * theta);
    const double jr = pi * r * r * r * 0.5 * spec.scale * sec * sec;
    const double psi = pi * t[1];
    const double sp = std::sin(psi), cp = std::cos(psi);
    const double jpsi = pi * sp * sp;
    const double u = 2 * t[2] - 1;
    const double st = std::sqrt(std::max(0.0, 1 - u * u));
    const double ju = 2.0;
    const double phi = 2 * pi * t[3];
    const double jphi = 2 * pi;
    const Quaternion dir{cp, sp * u, sp * st * std::cos(phi), sp * st * std::sin(phi)};
    const double val = f(spec.center + r * dir);
    return val * jr * jpsi * ju * jphi;
  };

  // Grow the level until the next one would exceed the budget.
  IntegralResult res;
  double prev = 0;
  bool have_prev = false;
  for (int q = 5; q <= 14; ++q) {
    int64_t pass_nodes = 0;
    const double val = smolyak_pass(g, q, &pass_nodes);
    if (res.nodes + pass_nodes > spec.budget && have_prev) break;
    res.nodes += pass_nodes;
    if (have_prev) res.error = std::abs(val - prev);
    prev = val;
    res.value = val;
    have_prev = true;
    if (res.nodes * 3 > spec.budget) break;  // next level would blow the budget
  }
  return res;
}

}  // namespace

int worker_threads() {
  static const int n = [] {
    if (const char* env = std::getenv("INSTANTON_THREADS")) {
      const int v = std::atoi(env);
      if (v >= 1) return std::min(v, 64);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 16u));
  }();
  return n;
}

IntegralResult integrate_r4(const ScalarField& f, const R4QuadratureSpec& spec) {
  if (spec.budget < 16) throw QuadratureBudgetExceeded("integrate_r4: budget too small");
  if (!(spec.scale > 0)) throw DomainError("integrate_r4: scale must be positive");
  switch (spec.scheme) {
    case QuadScheme::RadialSpherical:
      return integrate_radial_spherical(f, spec);
    case QuadScheme::MonteCarloImportance:
      return integrate_mc(f, spec);
    case QuadScheme::SparseGrid:
      return integrate_sparse(f, spec);
  }
  throw DomainError("integrate_r4: unknown scheme");
}

}  // namespace instanton
