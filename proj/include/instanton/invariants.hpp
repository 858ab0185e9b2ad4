#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "instanton/quadrature.hpp"
#include "instanton/submanifold.hpp"

namespace instanton {

struct LinkingResult {
  double value = 0.0;
  double error = 0.0;  // |fine - coarse| between two rule orders
  long nearest_integer = 0;
  std::string config;
};

// Gauss linking number of two disjoint compact submanifolds with dim a + dim b = 3:
// (1/2pi^2) int_a int_b |x-y|^-4 det[x-y, a-tangents, -(b-tangents)], the degree of
// the difference direction map.  Signs follow the model parametrization orientations;
// a point inside a model 3-sphere links +1.  Throws DimensionMismatch on a bad
// dimension pair and NotDisjoint when the surfaces (numerically) touch.
LinkingResult gauss_link(const SubmanifoldSpec& a, const SubmanifoldSpec& b);

// One point of the width-rho charge-1 family.
struct K1Modulus {
  Quaternion t;
  double rho = 1.0;
};

// Tangent vector of the total space R^4_x x (moduli of the charge-1 family).
struct TotalVector {
  Quaternion dx;   // spatial part
  Quaternion dt;   // center part
  double drho = 0.0;
};

// Moduli-only tangent (dx = 0).
struct ModuliVector {
  Quaternion dt;
  double drho = 0.0;
};

// The closed total-space 4-form of the charge-1 family,
//   c = g4 dxt_1^dxt_2^dxt_3^dxt_4 + g3 drho ^ psi,
// with xt = x - T, dxt(V) = dx - dT, D^2 = rho^2 + |xt|^2, g4 = 6 rho^4/(pi^2 D^8),
// g3 = 6 rho^3/(pi^2 D^8), and psi(u1,u2,u3) = -det[xt, u1, u2, u3].  The relative
// sign is forced by closedness (dc = 0, which tests check by finite differences).
// Its fiber integral over x at fixed moduli is 1, and the spatial restriction is
// the charge density of the corresponding instanton.
double total_form_k1(const K1Modulus& m, const Quaternion& x,
                     std::span<const TotalVector> v);

// mu(Sigma)(w_1..w_{4-d}) = int_Sigma c(t_1,..,t_d, w_1,..,w_{4-d}): the (4-d)-form
// on moduli induced by a d-dimensional surface, x-tangents filling the first slots.
double mu_form_k1(const SubmanifoldSpec& sigma, const K1Modulus& m,
                  std::span<const ModuliVector> w, int order_override = 0);

// Sorted index subsets of {0..4} of the given size, lexicographic.  Index 0..3 are
// the dT directions, index 4 is drho; this fixes the component order used below and
// the moduli orientation dT_1^dT_2^dT_3^dT_4^drho.
std::vector<std::vector<int>> moduli_subsets(int size);

// All components mu(Sigma)(E_S) over moduli_subsets(4 - dim), one surface-quadrature
// pass.  Order 0 keeps the spec's own order.
std::vector<double> mu_form_components(const SubmanifoldSpec& sigma, const K1Modulus& m,
                                       int order_override = 0);

struct Don1Options {
  int64_t samples = 400'000;  // outer Monte Carlo samples per epsilon
  uint64_t seed = 7;
  std::vector<double> epsilons;  // rho cutoffs; empty -> {0.2, 0.1, 0.05} * scale
  int inner_order = 6;           // surface-rule order for the mu evaluations
  // Cutoff weight phi(T, rho); null -> smooth bump identically 1 on a ball holding
  // the configuration with margin.
  std::function<double(const Quaternion&, double)> phi;
};

struct Don1Result {
  double value = 0.0;  // extrapolated to epsilon -> 0
  double error = 0.0;  // Monte Carlo + extrapolation spread
  std::vector<double> epsilons;  // effective cutoffs (defaults filled in)
  std::vector<double> at_epsilon;
  std::vector<double> mc_error;
  std::string config;
};

// The first-order Donaldson-type integral of the charge-1 family:
//   int_{R^4 x (eps,inf)} phi * [mu(Sigma_1) ^ ... ^ mu(Sigma_l)] dT,drho,
// extrapolated over the epsilon sequence (the cut error decays ~eps^4).  Requires
// sum dim(Sigma_i) = 4l - 5 (DimensionBudgetViolated otherwise).  Nonzero values
// detect the charge-1 anomaly: for two factors the result is C * gauss_link with a
// configuration-independent constant C.
Don1Result don1(const std::vector<SubmanifoldSpec>& sigmas, const Don1Options& opt = {});

// Mass int rho^4 / (rho^2 + |y - center|^2)^n f(y) d^4y of the delta-family kernel;
// f null means f = 1.  As rho -> 0 the mass tends to (pi^2/6) f(center) for n = 4
// and to 0 for n in {2, 3}; (6/pi^2) times the n = 4 kernel is the charge-1 density.
// For n = 2 the f = 1 integral is log-divergent at infinity and the compactified
// rule reports only the (vanishing) near-center part; pass a decaying f when the
// value itself matters.
IntegralResult delta_family_mass(int n, double rho, const ScalarField& f = nullptr,
                                 const Quaternion& center = {}, int64_t budget = 200'000);

}  // namespace instanton
