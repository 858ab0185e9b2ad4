#pragma once

// Private 1D quadrature rules shared by the R^4 and surface integrators.

#include <cmath>
#include <numbers>
#include <vector>

namespace instanton::rules {

struct Rule1d {
  std::vector<double> x, w;
};

// Gauss-Legendre on (-1, 1) by Newton iteration on Legendre polynomials.
inline Rule1d gauss_legendre(int n) {
  using std::numbers::pi;
  Rule1d r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1 - x * x) * pp * pp);
  }
  return r;
}

inline Rule1d gauss_legendre_on(int n, double a, double b) {
  Rule1d r = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = 0.5 * (a + b) + 0.5 * (b - a) * r.x[i];
    r.w[i] *= 0.5 * (b - a);
  }
  return r;
}

}  // namespace instanton::rules
